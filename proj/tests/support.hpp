// Instance generators shared by the unit tests and the acceptance runner.
#pragma once

#include "ldconc/selfbound.hpp"
#include "ldconc/spectrum.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace ldconc::testing {

/// λ_1 of [[x0, x1], [x1, x2]] with entries in {-1, 1}, on {0,1}^3.
inline TabulatedFunction<double> lambda1_sign_2x2() {
  return TabulatedFunction<double>::from({2, 2, 2}, [](const Point& p) {
    const double a = p[0] ? 1.0 : -1.0, b = p[1] ? 1.0 : -1.0, c = p[2] ? 1.0 : -1.0;
    return symmetric_spectrum(RealMatrix(2, 2, {a, b, b, c})).front();
  });
}

struct TransferInstance {
  TabulatedFunction<Rational> f;
  AlphaTable<Rational> alpha;
  SelfBoundingVariant premise = SelfBoundingVariant::alpha_sb;
  Rational a, b;
  HyperDependence hd;
  std::vector<std::size_t> source_sizes;
  std::vector<SourceMap> maps;
};

/// f(x) = max_j Σ_i w_j,i(x_i) with w in [0, 1], and α_i(x) = w_{j*, i}(x_i)
/// for the lowest maximizing j*. Then f(x) - f(y) <= Σ_{x_i != y_i} α_i(x),
/// α_i <= 1 and Σ α_i = f(x), so the α-premise holds with a = 1.
inline TransferInstance random_transfer_instance(std::mt19937_64& rng, SelfBoundingVariant premise) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(rng() % (hi - lo + 1)); };
  TransferInstance in;
  in.premise = premise;
  const std::size_t n = pick(2, 4);
  std::size_t N = 0;
  std::size_t ydomain = 0;
  std::vector<IndexSet> S;
  do {
    N = pick(2, 5);
    in.source_sizes.assign(N, 0);
    ydomain = 1;
    for (auto& s : in.source_sizes) {
      s = pick(2, 3);
      ydomain *= s;
    }
  } while (ydomain > 1024);
  S.assign(n, {});
  for (auto& s : S) {
    const std::size_t k = pick(1, std::min<std::size_t>(3, N));
    while (s.size() < k) {
      const std::size_t j = pick(0, N - 1);
      if (std::find(s.begin(), s.end(), j) == s.end()) s.push_back(j);
    }
    std::sort(s.begin(), s.end());
  }
  in.hd = HyperDependence(N, S);

  std::vector<std::size_t> xs(n);
  for (auto& s : xs) s = pick(2, 3);
  in.maps.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t local = 1;
    for (auto j : in.hd.sources_of(i)) local *= in.source_sizes[j];
    in.maps[i].table.resize(local);
    for (auto& v : in.maps[i].table) v = pick(0, xs[i] - 1);
  }

  const std::size_t J = pick(1, 3);
  std::vector<std::vector<std::vector<Rational>>> w(J, std::vector<std::vector<Rational>>(n));
  for (auto& wj : w)
    for (std::size_t i = 0; i < n; ++i) {
      wj[i].resize(xs[i]);
      for (auto& v : wj[i]) v = Rational(static_cast<long>(pick(0, 4)), 4);
    }

  ProductDomain d(xs);
  std::vector<Rational> values;
  in.alpha = {n, {}};
  for (std::size_t idx = 0; idx < d.size(); ++idx) {
    std::size_t best = 0;
    Rational best_v = -1;
    for (std::size_t j = 0; j < J; ++j) {
      Rational v = 0;
      for (std::size_t i = 0; i < n; ++i) v += w[j][i][d.coord(idx, i)];
      if (v > best_v) {
        best_v = v;
        best = j;
      }
    }
    values.push_back(best_v);
    for (std::size_t i = 0; i < n; ++i) in.alpha.values.push_back(w[best][i][d.coord(idx, i)]);
  }
  in.f = TabulatedFunction<Rational>(xs, std::move(values));
  in.a = Rational(static_cast<long>(pick(2, 4)), 2);  // a in {1, 3/2, 2}
  in.b = Rational(static_cast<long>(pick(0, 2)), 2);  // b in {0, 1/2, 1}
  return in;
}

}  // namespace ldconc::testing
