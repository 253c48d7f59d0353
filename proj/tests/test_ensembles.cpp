#include "ldconc/covers.hpp"
#include "ldconc/ensembles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>

using namespace ldconc;

TEST(Rng, SubstreamsAreDeterministicAndDistinct) {
  Rng a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  const auto x = a.next();
  EXPECT_EQ(x, b.next());
  EXPECT_NE(x, c.next());
  EXPECT_NE(x, d.next());
  Rng u(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
    const int s = u.sign();
    EXPECT_TRUE(s == 1 || s == -1);
  }
}

TEST(Ensembles, RealizationsAreDeterministic) {
  std::vector<std::unique_ptr<Ensemble>> all;
  all.push_back(std::make_unique<CounterexampleEnsemble>(10));
  all.push_back(std::make_unique<MDependentEnsemble>(12, 3, WindowFamily::max, SourceLaw::uniform));
  all.push_back(std::make_unique<ErTriangleEnsemble>(6, 0.5));
  all.push_back(std::make_unique<HdSymmetricEnsemble>(5, "row-block-sign", 2, EntryLaw::uniform));
  all.push_back(std::make_unique<Ld1HermitianEnsemble>(5, "paired", 2.0));
  all.push_back(std::make_unique<IidSignEnsemble>(9));
  for (const auto& e : all) {
    auto x = e->realization(42, 5);
    EXPECT_EQ(x.size(), e->dimension()) << e->name();
    EXPECT_EQ(x, e->realization(42, 5)) << e->name();
    auto r = e->variable_ranges();
    ASSERT_EQ(r.size(), x.size());
    for (int rep = 0; rep < 50; ++rep) {
      auto y = e->realization(1, rep);
      for (std::size_t i = 0; i < y.size(); ++i) {
        EXPECT_GE(y[i], r[i].first) << e->name();
        EXPECT_LE(y[i], r[i].second) << e->name();
      }
    }
    EXPECT_THROW(e->statistic("no-such-statistic"), std::invalid_argument);
  }
}

TEST(Counterexample, StructureAndStatistic) {
  for (std::size_t n : {2u, 4u, 10u, 50u}) {
    CounterexampleEnsemble e(n);
    const auto f = e.statistic("f");
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
      auto r = gen_counterexample(n, 9, rep);
      EXPECT_EQ(r.f, static_cast<double>(n) * r.q / 2.0);
      for (std::size_t i = 0; i < n / 2; ++i) EXPECT_EQ(r.x_prime[i], r.q * r.x[i]);
      auto x = e.realization(9, rep);
      EXPECT_EQ(f(x), r.f);
    }
    auto g = e.dependency_graph();
    EXPECT_EQ(g.max_degree(), 1u);
    EXPECT_EQ(g.edge_count(), n / 2);
    EXPECT_EQ(fractional_chromatic(g).value, Rational(2));
    auto p = hd_params(e.naive_hd());
    EXPECT_EQ(p.k, 2u);
    EXPECT_EQ(p.l, std::max<std::size_t>(2, n / 2));
  }
  EXPECT_THROW(CounterexampleEnsemble(5), std::invalid_argument);
}

TEST(Counterexample, BothSignsOccur) {
  int pos = 0;
  for (std::uint64_t rep = 0; rep < 200; ++rep) pos += gen_counterexample(10, 3, rep).q > 0;
  EXPECT_GT(pos, 60);
  EXPECT_LT(pos, 140);
}

TEST(MDependent, DeclaredStructure) {
  MDependentEnsemble e(6, 2, WindowFamily::sum, SourceLaw::sign);
  auto p = hd_params(*e.declared_hd());
  EXPECT_EQ(p.k, 2u);
  EXPECT_EQ(p.l, 3u);
  MDependentEnsemble big(100, 3, WindowFamily::sum, SourceLaw::sign);
  auto q = hd_params(*big.declared_hd());
  EXPECT_EQ(q.k, 2u);
  // The last block holds 4 sources and meets 6 windows.
  EXPECT_EQ(q.l, 6u);
  auto g = big.dependency_graph();
  EXPECT_EQ(g.max_degree(), 4u);
  EXPECT_EQ(fractional_chromatic(g).value, Rational(100, 33));
  EXPECT_THROW(MDependentEnsemble(2, 3, WindowFamily::sum, SourceLaw::sign), std::invalid_argument);
}

TEST(MDependent, WindowValues) {
  for (auto fam : {WindowFamily::sum, WindowFamily::xor_sign, WindowFamily::max})
    for (auto law : {SourceLaw::sign, SourceLaw::uniform}) {
      auto r = gen_m_dependent(7, 3, fam, law, 5, 1);
      for (std::size_t i = 0; i < 7; ++i) {
        const double a = r.y[i], b = r.y[(i + 1) % 7], c = r.y[(i + 2) % 7];
        auto bit = [&](double v) { return law == SourceLaw::sign ? v : (v >= 0.5 ? 1.0 : -1.0); };
        double want = 0.0;
        switch (fam) {
          case WindowFamily::sum: want = a + b + c; break;
          case WindowFamily::xor_sign: want = bit(a) * bit(b) * bit(c); break;
          case WindowFamily::max: want = std::max({a, b, c}); break;
        }
        EXPECT_DOUBLE_EQ(r.x[i], want);
      }
    }
}

TEST(MDependent, SignMomentsByEnumeration) {
  // Sign sources: enumerate the window exactly.
  for (std::size_t m = 1; m <= 4; ++m)
    for (auto fam : {WindowFamily::sum, WindowFamily::xor_sign, WindowFamily::max}) {
      double s1 = 0.0, s2 = 0.0, hi = -1e9;
      const std::size_t cnt = std::size_t{1} << m;
      for (std::size_t mask = 0; mask < cnt; ++mask) {
        double acc = fam == WindowFamily::sum ? 0.0 : (fam == WindowFamily::xor_sign ? 1.0 : -1e9);
        for (std::size_t w = 0; w < m; ++w) {
          const double y = (mask >> w & 1) ? 1.0 : -1.0;
          if (fam == WindowFamily::sum) acc += y;
          else if (fam == WindowFamily::xor_sign) acc *= y;
          else acc = std::max(acc, y);
        }
        s1 += acc;
        s2 += acc * acc;
        hi = std::max(hi, acc);
      }
      const double mean = s1 / cnt, var = s2 / cnt - mean * mean;
      auto mo = *MDependentEnsemble(8, m, fam, SourceLaw::sign).moments();
      EXPECT_NEAR(mo.mean, mean, 1e-12);
      EXPECT_NEAR(mo.variance, var, 1e-12);
      EXPECT_NEAR(mo.upper_deviation, hi - mean, 1e-12);
    }
}

TEST(MDependent, UniformMomentsBySampling) {
  for (auto fam : {WindowFamily::sum, WindowFamily::max}) {
    MDependentEnsemble e(50, 3, fam, SourceLaw::uniform);
    double s1 = 0.0, s2 = 0.0;
    std::size_t cnt = 0;
    for (std::uint64_t rep = 0; rep < 2000; ++rep)
      for (double v : e.realization(77, rep)) {
        s1 += v;
        s2 += v * v;
        ++cnt;
      }
    const double mean = s1 / cnt, var = s2 / cnt - mean * mean;
    auto mo = *e.moments();
    EXPECT_NEAR(mo.mean, mean, 0.01);
    EXPECT_NEAR(mo.variance, var, 0.01);
  }
}

TEST(ErTriangles, StructureAndCount) {
  ErTriangleEnsemble e(5, 0.5);
  EXPECT_EQ(e.dimension(), 10u);
  EXPECT_EQ(e.edge_count(), 10u);
  auto p = hd_params(*e.declared_hd());
  EXPECT_EQ(p.k, 3u);
  EXPECT_EQ(p.l, 3u);
  EXPECT_EQ(p.max_degree, 6u);
  for (std::uint64_t rep = 0; rep < 30; ++rep) {
    auto r = gen_er_triangles(5, 0.5, 2, rep);
    std::size_t want = 0;
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = i + 1; j < 5; ++j)
        for (std::size_t k = j + 1; k < 5; ++k)
          want += r.edges[e.edge_index(i, j)] && r.edges[e.edge_index(i, k)] && r.edges[e.edge_index(j, k)];
    std::size_t got = 0;
    for (auto t : r.triangles) got += t;
    EXPECT_EQ(got, want);
  }
  std::vector<bool> seen(e.edge_count());
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) {
      EXPECT_EQ(e.edge_index(i, j), e.edge_index(j, i));
      EXPECT_FALSE(seen[e.edge_index(i, j)]);
      seen[e.edge_index(i, j)] = true;
    }
  auto mo = *ErTriangleEnsemble(5, 0.5).moments();
  EXPECT_DOUBLE_EQ(mo.mean, 0.125);
  EXPECT_THROW(ErTriangleEnsemble(5, 1.5), std::invalid_argument);
}

TEST(HdSymmetric, Structure) {
  HdSymmetricEnsemble iid(6, "iid", 1, EntryLaw::sign);
  auto pi = hd_params(*iid.declared_hd());
  EXPECT_EQ(pi.k, 1u);
  EXPECT_EQ(pi.l, 1u);
  for (std::size_t w : {1u, 2u, 3u, 6u}) {
    HdSymmetricEnsemble e(6, "row-block-sign", w, EntryLaw::uniform);
    auto p = hd_params(*e.declared_hd());
    EXPECT_EQ(p.k, 2u);
    EXPECT_EQ(p.l, w);
  }
  EXPECT_THROW(HdSymmetricEnsemble(4, "row-block-sign", 5, EntryLaw::sign), std::invalid_argument);
  EXPECT_THROW(HdSymmetricEnsemble(4, "banded", 1, EntryLaw::sign), std::invalid_argument);
}

TEST(HdSymmetric, SharedSignsWithinBlocks) {
  // Products of signs stay signs; the matrix is symmetric.
  HdSymmetricEnsemble e(5, "row-block-sign", 2, EntryLaw::sign);
  auto m = e.gen_matrix(3, 0);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_EQ(std::abs(m(i, j)), 1.0);
      EXPECT_EQ(m(i, j), m(j, i));
    }
}

TEST(Ld1Hermitian, PairedStructure) {
  Ld1HermitianEnsemble e(4, "paired", 1.5);
  auto g = e.dependency_graph();
  EXPECT_EQ(g.max_degree(), 1u);
  EXPECT_EQ(fractional_chromatic(g).value, Rational(2));
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    auto x = e.realization(4, rep);
    const double q = x[1] / x[0];
    for (std::size_t p = 0; p + 1 < x.size(); p += 2) EXPECT_EQ(x[p + 1], q * x[p]);
    for (double v : x) EXPECT_EQ(std::abs(v), 1.5);
  }
  Ld1HermitianEnsemble iid(4, "iid", 1.0);
  EXPECT_EQ(iid.dependency_graph().edge_count(), 0u);
  EXPECT_THROW(Ld1HermitianEnsemble(4, "paired", 0.0), std::invalid_argument);
}

TEST(MatrixStatistics, AgreeWithSpectrum) {
  HdSymmetricEnsemble e(6, "row-block-sign", 3, EntryLaw::uniform);
  const auto norm = e.statistic("norm"), top = e.statistic("lambda:1"), second = e.statistic("lambda:2"),
             low = e.statistic("lambda-low:1");
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    auto x = e.realization(8, rep);
    auto ev = symmetric_spectrum(symmetric_from_upper(6, x));
    EXPECT_DOUBLE_EQ(top(x), ev[0]);
    EXPECT_DOUBLE_EQ(second(x), ev[1]);
    EXPECT_DOUBLE_EQ(low(x), ev[5]);
    EXPECT_DOUBLE_EQ(norm(x), std::max(std::abs(ev[0]), std::abs(ev[5])));
  }
  EXPECT_THROW(e.statistic("lambda:0"), std::invalid_argument);
  EXPECT_THROW(e.statistic("lambda:7"), std::invalid_argument);
  EXPECT_THROW(e.statistic("lambda:x"), std::invalid_argument);
  EXPECT_EQ(*e.matrix_order(), 6u);
}
