#include "ldconc/montecarlo.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ldconc;

namespace {

// Oracle: binomial tail sums from log-gamma, and bisection for the
// Clopper-Pearson endpoints.
double binom_cdf(std::size_t x, std::size_t n, double p) {
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return x >= n ? 1.0 : 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k <= x; ++k)
    s += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(p) +
                  (n - k) * std::log1p(-p));
  return s;
}

double bisect(const std::function<bool(double)>& above) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2;
    (above(mid) ? hi : lo) = mid;
  }
  return (lo + hi) / 2;
}

BoundCurve curve_of(const std::vector<double>& grid, const std::vector<double>& raw) {
  BoundCurve c;
  c.name = "test";
  for (std::size_t i = 0; i < grid.size(); ++i) c.grid.push_back({grid[i], BoundValue{raw[i], false}});
  return c;
}

}  // namespace

TEST(ClopperPearson, MatchesBisectionOracle) {
  for (auto [x, n] : {std::pair<std::size_t, std::size_t>{0, 10}, {3, 10}, {10, 10}, {17, 200}, {1, 1000}}) {
    for (double level : {0.9, 0.99}) {
      const double a = (1.0 - level) / 2.0;
      auto ci = clopper_pearson(x, n, level);
      const double lo = x == 0 ? 0.0 : bisect([&](double p) { return 1.0 - binom_cdf(x - 1, n, p) >= a; });
      const double hi = x == n ? 1.0 : bisect([&](double p) { return binom_cdf(x, n, p) <= a; });
      EXPECT_NEAR(ci.low, lo, 1e-9) << x << "/" << n;
      EXPECT_NEAR(ci.high, hi, 1e-9) << x << "/" << n;
      EXPECT_LE(ci.low, static_cast<double>(x) / n);
      EXPECT_GE(ci.high, static_cast<double>(x) / n);
    }
  }
  // x = 0: upper limit 1 - (α/2)^{1/n}.
  EXPECT_NEAR(clopper_pearson(0, 50, 0.99).high, 1.0 - std::pow(0.005, 1.0 / 50), 1e-12);
  EXPECT_THROW(clopper_pearson(1, 0, 0.99), std::invalid_argument);
  EXPECT_THROW(clopper_pearson(3, 2, 0.99), std::invalid_argument);
  EXPECT_THROW(clopper_pearson(1, 2, 1.0), std::invalid_argument);
}

TEST(ClopperPearson, WidthShrinksWithTrials) {
  double prev = 1.0;
  for (std::size_t n : {100u, 1000u, 10000u, 100000u}) {
    auto ci = clopper_pearson(n / 4, n, 0.99);
    EXPECT_LT(ci.high - ci.low, prev);
    prev = ci.high - ci.low;
  }
}

TEST(TailReport, ConstantStatistic) {
  std::vector<double> v(500, 3.0);
  TailOptions none{Centering::none(), TailSide::upper, 0.99, 1};
  auto r = tail_report(v, {0.0, 3.0, 3.5}, none);
  EXPECT_EQ(r.rows[0].p_hat, 1.0);
  EXPECT_EQ(r.rows[1].p_hat, 1.0);
  EXPECT_EQ(r.rows[2].p_hat, 0.0);
  auto c = tail_report(v, {0.0, 0.5}, {});
  EXPECT_EQ(c.center, 3.0);
  EXPECT_EQ(c.rows[0].p_hat, 1.0);
  EXPECT_EQ(c.rows[1].p_hat, 0.0);
  EXPECT_THROW(tail_report(v, {-1.0}, {}), std::invalid_argument);
  EXPECT_THROW(tail_report({}, {1.0}, {}), std::invalid_argument);
}

TEST(TailReport, SidesAndCentering) {
  std::vector<double> v{-2.0, -1.0, 0.0, 1.0, 2.0, 5.0};
  auto up = tail_report(v, {1.0}, {Centering::none(), TailSide::upper, 0.9, 1});
  EXPECT_EQ(up.rows[0].count, 3u);
  auto lo = tail_report(v, {1.0}, {Centering::none(), TailSide::lower, 0.9, 1});
  EXPECT_EQ(lo.rows[0].count, 2u);
  // Absolute side counts strict exceedances.
  auto ab = tail_report(v, {1.0}, {Centering::none(), TailSide::absolute, 0.9, 1});
  EXPECT_EQ(ab.rows[0].count, 3u);
  auto fx = tail_report(v, {3.0}, {Centering::fixed(2.0), TailSide::upper, 0.9, 1});
  EXPECT_EQ(fx.rows[0].count, 1u);
  auto md = tail_report(v, {0.0}, {Centering::median(), TailSide::absolute, 0.9, 1});
  EXPECT_EQ(md.center, 0.0);
  EXPECT_EQ(md.rows[0].count, 5u);
  EXPECT_EQ(detail::lower_median({4.0, 1.0, 3.0, 2.0}), 2.0);
  EXPECT_EQ(detail::lower_median({7.0}), 7.0);
}

TEST(EstimateTail, IidSignsMatchExactProbability) {
  IidSignEnsemble e(4);
  TailOptions opt{Centering::none(), TailSide::upper, 0.99, 2};
  auto r = estimate_tail(e, "sum", {0.0, 2.0, 4.0, 5.0}, 20000, 11, opt);
  const double exact[] = {11.0 / 16.0, 5.0 / 16.0, 1.0 / 16.0, 0.0};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_LE(r.rows[i].ci.low, exact[i]);
    EXPECT_GE(r.rows[i].ci.high, exact[i]);
  }
  EXPECT_EQ(r.ensemble, "iid-sign");
  EXPECT_EQ(r.replicas, 20000u);
  EXPECT_THROW(estimate_tail(e, "sum", {1.0}, 99, 1), std::invalid_argument);
  EXPECT_THROW(estimate_tail(e, "nope", {1.0}, 100, 1), std::invalid_argument);
}

TEST(Simulate, DeterministicAcrossThreadCounts) {
  MDependentEnsemble e(30, 3, WindowFamily::max, SourceLaw::uniform);
  const auto s = e.statistic("sum");
  auto a = simulate(e, s, 1001, 5, 1);
  for (unsigned t : {2u, 3u, 8u}) EXPECT_EQ(simulate(e, s, 1001, 5, t), a);
  EXPECT_NE(simulate(e, s, 1001, 6, 1), a);
}

TEST(RunReplicas, PropagatesExceptions) {
  EXPECT_THROW(run_replicas(100, 1, 4,
                            [](Rng&, std::size_t r) -> double {
                              if (r == 57) throw std::runtime_error("boom");
                              return 0.0;
                            }),
               std::runtime_error);
}

TEST(Mgf, ExactValues) {
  IidSignEnsemble e(1);
  const auto s = e.statistic("sum");
  auto z = estimate_mgf(e, s, 0.0, 1000, 3);
  EXPECT_EQ(z.mean, 1.0);
  EXPECT_EQ(z.std_error, 0.0);
  auto m = estimate_mgf(e, s, 1.0, 20000, 3);
  EXPECT_LE(m.ci.low, std::cosh(1.0));
  EXPECT_GE(m.ci.high, std::cosh(1.0));
  EXPECT_THROW(mgf_from_values({1000.0, 0.0}, 1.0), std::overflow_error);
  EXPECT_THROW(mgf_from_values({1.0}, 1.0), std::invalid_argument);
}

TEST(MedianDeviation, MatrixEnsembles) {
  HdSymmetricEnsemble e(4, "iid", 1, EntryLaw::uniform);
  auto r = estimate_median_deviation(e, 1, {0.0, 100.0}, 500, 3);
  EXPECT_EQ(r.statistic, "lambda:1");
  EXPECT_EQ(r.side, TailSide::absolute);
  EXPECT_EQ(r.rows[1].count, 0u);
  EXPECT_GT(r.rows[0].p_hat, 0.9);
  auto low = estimate_median_deviation(e, 1, {0.0}, 200, 3, 0.99, 1, true);
  EXPECT_EQ(low.statistic, "lambda-low:1");
  EXPECT_THROW(estimate_median_deviation(IidSignEnsemble(4), 1, {0.0}, 200, 3), std::invalid_argument);
  EXPECT_THROW(estimate_median_deviation(e, 5, {0.0}, 200, 3), std::invalid_argument);
}

TEST(CompareBound, Verdicts) {
  std::vector<double> v(1000, 0.0);
  for (std::size_t i = 0; i < 500; ++i) v[i] = 1.0;
  const std::vector<double> grid{0.5, 2.0};
  auto rep = tail_report(v, grid, {Centering::none(), TailSide::upper, 0.99, 1});
  auto ok = compare_bound(rep, curve_of(grid, {0.6, 0.0}));
  EXPECT_TRUE(ok.pass);
  auto bad = compare_bound(rep, curve_of(grid, {0.3, 0.0}));
  EXPECT_FALSE(bad.pass);
  EXPECT_FALSE(bad.rows[0].pass);
  EXPECT_TRUE(bad.rows[1].pass);
  // Raw values above 1 are capped before comparing.
  auto cap = compare_bound(rep, curve_of(grid, {4.0, 4.0}));
  EXPECT_TRUE(cap.pass);
  EXPECT_EQ(cap.rows[0].bound_capped, 1.0);
  EXPECT_EQ(cap.rows[0].bound_raw, 4.0);
  // A bound inside the CI passes even when below p_hat.
  const double inside = (rep.rows[0].ci.low + rep.rows[0].p_hat) / 2;
  EXPECT_TRUE(compare_bound(rep, curve_of(grid, {inside, 0.0})).pass);
  EXPECT_THROW(compare_bound(rep, curve_of({0.5}, {1.0})), std::invalid_argument);
  EXPECT_THROW(compare_bound(rep, curve_of({0.5, 3.0}, {1.0, 1.0})), std::invalid_argument);
}
