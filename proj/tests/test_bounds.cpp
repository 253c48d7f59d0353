#include "ldconc/bounds.hpp"
#include "ldconc/registry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

using namespace ldconc;

namespace {

const std::vector<double> kGrid = [] {
  std::vector<double> g;
  for (int i = 0; i <= 80; ++i) g.push_back(0.25 * i);
  return g;
}();

void expect_tail_shape(const std::function<BoundValue(double)>& f, double at_zero) {
  EXPECT_DOUBLE_EQ(f(0.0).raw, at_zero);
  double prev = f(0.0).raw;
  for (double t : kGrid) {
    const double v = f(t).raw;
    EXPECT_LE(v, prev + 1e-15) << "t=" << t;
    EXPECT_GT(v, 0.0);
    // Continuity on the grid: small steps give small changes.
    EXPECT_NEAR(f(t + 1e-7).raw, v, 1e-5);
    prev = v;
  }
}

}  // namespace

TEST(JansonHoeffding, Examples) {
  std::vector<double> ranges(16, 1.0);
  EXPECT_EQ(janson_hoeffding(2, ranges, 0.0).raw, 1.0);
  EXPECT_NEAR(janson_hoeffding(2, ranges, 4.0).raw, std::exp(-1.0), 1e-15);
  // Four fair signs: exact P(S >= 4) = 1/16 by enumeration.
  int hits = 0;
  for (int m = 0; m < 16; ++m) {
    int s = 0;
    for (int i = 0; i < 4; ++i) s += (m >> i & 1) ? 1 : -1;
    hits += s >= 4;
  }
  std::vector<double> r2(4, 2.0);
  const double b = janson_hoeffding(1, r2, 4.0).raw;
  EXPECT_NEAR(b, std::exp(-2.0), 1e-15);
  EXPECT_GE(b, hits / 16.0);
}

TEST(JansonHoeffding, ClassicalAtChiOne) {
  std::vector<double> ranges{1.0, 2.0, 0.5, 3.0};
  double s = 0.0;
  for (double r : ranges) s += r * r;
  for (double t : kGrid) EXPECT_DOUBLE_EQ(janson_hoeffding(1, ranges, t).raw, std::exp(-2.0 * t * t / s));
}

TEST(JansonHoeffding, DegenerateAndErrors) {
  std::vector<double> zero(3, 0.0);
  auto v = janson_hoeffding(1, zero, 1.0);
  EXPECT_EQ(v.raw, 0.0);
  EXPECT_TRUE(v.degenerate);
  EXPECT_THROW(janson_hoeffding(Rational(1, 2), zero, 1.0), std::domain_error);
  EXPECT_THROW(janson_hoeffding(1, zero, -1.0), std::domain_error);
}

TEST(JansonBernstein, Examples) {
  EXPECT_EQ(janson_bernstein(1, 4.0, 1.0, 0.0).raw, 1.0);
  EXPECT_NEAR(janson_bernstein(1, 4.0, 1.0, 3.0).raw, std::exp(-72.0 / 125.0), 1e-15);
  EXPECT_LT(janson_bernstein(1, 4.0, 1.0, 6.0).raw, janson_bernstein(1, 4.0, 1.0, 3.0).raw);
  EXPECT_THROW(janson_bernstein(1, 4.0, 0.0, 1.0), std::domain_error);
}

TEST(SelfBoundingTail, Examples) {
  const SelfBoundParams p(1.0, 0.0, 10.0);
  EXPECT_NEAR(p.c_plus(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(self_bounding_tail(SelfBoundTail::sb_upper, p, 5.0).raw, std::exp(-15.0 / 14.0), 1e-15);
  for (auto k : {SelfBoundTail::sb_upper, SelfBoundTail::weak_upper, SelfBoundTail::weak_lower})
    EXPECT_EQ(self_bounding_tail(k, p, 0.0).raw, 1.0);
  // a = 4: c = 11/6 so c_- = 0 and the lower tail at t = E Z is exp(-E Z / 8).
  const SelfBoundParams q(4.0, 0.0, 3.0);
  EXPECT_EQ(q.c_minus(), 0.0);
  EXPECT_NEAR(self_bounding_tail(SelfBoundTail::weak_lower, q, 3.0).raw, std::exp(-3.0 / 8.0), 1e-15);
  EXPECT_THROW(self_bounding_tail(SelfBoundTail::weak_lower, q, 3.5), std::domain_error);
  EXPECT_THROW(SelfBoundParams(-1.0, 0.0, 1.0), std::domain_error);
  EXPECT_THROW(parse_self_bound_tail("upper"), std::invalid_argument);
}

TEST(SelfBoundingMgf, Examples) {
  const SelfBoundParams p(4.0, 0.0, 1.0);
  EXPECT_EQ(mgf_self_bounding(SelfBoundMgf::weak, p, 0.0), 0.0);
  EXPECT_NEAR(mgf_self_bounding(SelfBoundMgf::weak, p, 0.1), 1.0 / 40.0, 1e-15);
  EXPECT_THROW(mgf_self_bounding(SelfBoundMgf::weak, p, 0.6), std::domain_error);
  EXPECT_THROW(mgf_self_bounding(SelfBoundMgf::sb, p, 1.0), std::domain_error);
  // Convex and increasing in λ.
  double prev = 0.0, prev_step = 0.0;
  for (int i = 1; i <= 40; ++i) {
    const double v = mgf_self_bounding(SelfBoundMgf::weak, p, 0.01 * i);
    EXPECT_GT(v, prev);
    EXPECT_GE(v - prev, prev_step - 1e-15);
    prev_step = v - prev;
    prev = v;
  }
}

TEST(McDiarmidHd, Examples) {
  std::vector<double> c(6, 1.0);
  EXPECT_NEAR(mcdiarmid_hd(2, 3, c, 3.0).tail.raw, std::exp(-0.5), 1e-15);
  std::vector<double> c2(2, 1.0);
  EXPECT_NEAR(*mcdiarmid_hd(1, 1, c2, 0.0, 1.0).mgf, std::exp(0.25), 1e-15);
  // k = l = 1 is the classical bounded-differences bound.
  for (double t : kGrid) EXPECT_DOUBLE_EQ(mcdiarmid_hd(1, 1, c, t).tail.raw, std::exp(-2.0 * t * t / 6.0));
  std::vector<double> zero(2, 0.0);
  EXPECT_TRUE(mcdiarmid_hd(1, 1, zero, 1.0).tail.degenerate);
}

TEST(TalagrandHd, Examples) {
  EXPECT_EQ(talagrand_hd(1, 1, 0.0).raw, 1.0);
  EXPECT_NEAR(talagrand_hd(1, 1, std::sqrt(10.0)).raw, std::exp(-1.0), 1e-15);
  EXPECT_EQ(talagrand_exponent(2, 3), Rational(1, 60));
  auto b = talagrand_budget(1, 1);
  EXPECT_EQ(b.lambda, Rational(1, 10));
  EXPECT_EQ(b.mgf_coefficient, Rational(1, 40));
  EXPECT_EQ(b.total_coefficient, Rational(1, 8));
}

TEST(TalagrandHd, BudgetIdentityForSmallKl) {
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t l = 1; l <= 3; ++l) {
      auto b = talagrand_budget(k, l);
      EXPECT_EQ(b.total_coefficient, b.lower_tail_coefficient);
      EXPECT_EQ(b.total_coefficient, Rational(1) / Rational(8 * k * l));
    }
}

TEST(SubadditiveMgf, Examples) {
  const double e = std::exp(1.0);
  EXPECT_NEAR(subadditive_mgf({{1, e}, {1, e}}, 2), e, 1e-15);
  EXPECT_EQ(subadditive_mgf({{1, 3.7}}, 1), 3.7);
  EXPECT_EQ(subadditive_mgf({{1, 2.0}, {Rational(1, 2), 4.0}, {Rational(1, 2), 4.0}}, 2), 3.0);
  EXPECT_THROW(subadditive_mgf({{1, 2.0}}, 2), std::invalid_argument);
  EXPECT_THROW(subadditive_mgf({{1, 0.0}}, 1), std::domain_error);
}

TEST(MatrixNormTail, Examples) {
  auto h0 = matrix_norm_tail(MatrixShape::hermitian, 100, std::nullopt, 1.0, 1, 1.0, 0.0);
  EXPECT_EQ(h0.tail.raw, 1.0);
  auto h = matrix_norm_tail(MatrixShape::hermitian, 100, std::nullopt, 1.0, 1, 1.0, 8.0);
  EXPECT_NEAR(h.threshold, 30.0, 1e-12);
  EXPECT_NEAR(h.tail.raw, std::exp(-2.0), 1e-15);
  auto r = matrix_norm_tail(MatrixShape::rectangular, 16, 16, 1.0, 1, 1.0, 4.0);
  EXPECT_NEAR(r.threshold, 12.0, 1e-12);
  EXPECT_NEAR(r.tail.raw, std::exp(-2.0), 1e-15);
  EXPECT_THROW(matrix_norm_tail(MatrixShape::rectangular, 4, std::nullopt, 1.0, 1, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(matrix_norm_tail(MatrixShape::hermitian, 4, std::nullopt, 1.0, 1, 0.0, 1.0), std::domain_error);
}

TEST(MatrixNormTail, ThetaMinimisesChernoffExponent) {
  // exp(-θ t + 8 θ^2 K^2 χ*^2) for hermitian; exp(-θ t + 2 θ^2 K^2 χ*^2) rectangular.
  for (double t : {0.5, 2.0, 7.0}) {
    const double K = 1.5, chi = 2.0;
    auto h = matrix_norm_tail(MatrixShape::hermitian, 9, std::nullopt, K, 2, 1.0, t);
    auto expo_h = [&](double th) { return -th * t + 8.0 * th * th * K * K * chi * chi; };
    EXPECT_NEAR(std::exp(expo_h(h.theta)), h.tail.raw, 1e-12);
    EXPECT_LE(expo_h(h.theta), expo_h(h.theta * 1.01));
    EXPECT_LE(expo_h(h.theta), expo_h(h.theta * 0.99));
    auto r = matrix_norm_tail(MatrixShape::rectangular, 9, 4, K, 2, 1.0, t);
    auto expo_r = [&](double th) { return -th * t + 2.0 * th * th * K * K * chi * chi; };
    EXPECT_NEAR(std::exp(expo_r(r.theta)), r.tail.raw, 1e-12);
  }
}

TEST(EigenvalueTail, Examples) {
  auto z = eigenvalue_tail(1, 1, 1, 0.0);
  EXPECT_EQ(z.raw, 4.0);
  EXPECT_EQ(z.capped(), 1.0);
  EXPECT_TRUE(z.is_capped());
  auto v = eigenvalue_tail(1, 1, 1, 4.0 * std::sqrt(5.0));
  EXPECT_NEAR(v.raw, 4.0 * std::exp(-1.0), 1e-14);
  EXPECT_EQ(v.capped(), 1.0);
  // s = 2 at 2t equals s = 1 at t.
  EXPECT_NEAR(eigenvalue_tail(2, 1, 1, 6.0).raw, eigenvalue_tail(1, 1, 1, 3.0).raw, 1e-15);
  EXPECT_THROW(eigenvalue_tail(0, 1, 1, 1.0), std::domain_error);
}

TEST(Bounds, ShapeOnGrid) {
  std::vector<double> r(10, 1.0);
  expect_tail_shape([&](double t) { return janson_hoeffding(3, r, t); }, 1.0);
  expect_tail_shape([&](double t) { return janson_bernstein(3, 5.0, 2.0, t); }, 1.0);
  expect_tail_shape([&](double t) { return self_bounding_tail(SelfBoundTail::sb_upper, {2.0, 1.0, 3.0}, t); }, 1.0);
  expect_tail_shape([&](double t) { return self_bounding_tail(SelfBoundTail::weak_upper, {2.0, 1.0, 3.0}, t); },
                    1.0);
  expect_tail_shape([&](double t) { return mcdiarmid_hd(2, 2, r, t).tail; }, 1.0);
  expect_tail_shape([&](double t) { return talagrand_hd(2, 3, t); }, 1.0);
  expect_tail_shape([&](double t) { return eigenvalue_tail(2, 2, 3, t); }, 4.0);
  expect_tail_shape([&](double t) { return matrix_norm_tail(MatrixShape::hermitian, 4, {}, 1.0, 2, 1.0, t).tail; },
                    1.0);
}

TEST(Bounds, MonotoneInDependenceParameters) {
  std::vector<double> c(5, 1.0);
  for (double t : kGrid)
    for (std::size_t k = 1; k <= 3; ++k)
      for (std::size_t l = 1; l <= 3; ++l) {
        EXPECT_LE(mcdiarmid_hd(k, l, c, t).tail.raw, mcdiarmid_hd(k + 1, l, c, t).tail.raw);
        EXPECT_LE(mcdiarmid_hd(k, l, c, t).tail.raw, mcdiarmid_hd(k, l + 1, c, t).tail.raw);
        EXPECT_LE(talagrand_hd(k, l, t).raw, talagrand_hd(k + 1, l, t).raw);
        EXPECT_LE(talagrand_hd(k, l, t).raw, talagrand_hd(k, l + 1, t).raw);
        EXPECT_LE(eigenvalue_tail(1, k, l, t).raw, eigenvalue_tail(1, k + 1, l, t).raw);
        EXPECT_LE(eigenvalue_tail(1, k, l, t).raw, eigenvalue_tail(1, k, l + 1, t).raw);
      }
}

TEST(TGrid, Parse) {
  EXPECT_EQ(parse_t_grid("0:1:0.5"), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(parse_t_grid("5:100:5").size(), 20u);
  EXPECT_EQ(parse_t_grid("0:0.3:0.1").size(), 4u);
  EXPECT_THROW(parse_t_grid("1:0:1"), std::invalid_argument);
  EXPECT_THROW(parse_t_grid("0:1"), std::invalid_argument);
  EXPECT_THROW(parse_t_grid("0:1:0"), std::invalid_argument);
  EXPECT_THROW(parse_t_grid("0:x:1"), std::invalid_argument);
}

TEST(Registry, EvaluatesByName) {
  const auto grid = parse_t_grid("0:4:1");
  auto h = evaluate_named_bound("janson-hoeffding", parse_bound_params("chi=2,n=16,range=1"), grid);
  ASSERT_EQ(h.grid.size(), 5u);
  EXPECT_NEAR(h.grid[4].value.raw, std::exp(-1.0), 1e-15);
  auto h2 = evaluate_named_bound("janson-hoeffding", parse_bound_params("chi=2,range_sq_sum=16"), grid);
  EXPECT_EQ(h2.grid[4].value.raw, h.grid[4].value.raw);
  auto e = evaluate_named_bound("eigenvalue", {{"s", "1"}, {"k", "1"}, {"l", "1"}}, grid);
  EXPECT_EQ(e.grid[0].value.raw, 4.0);
  EXPECT_EQ(e.grid[0].value.capped(), 1.0);
  auto m = evaluate_named_bound("matrix-norm", parse_bound_params("shape=hermitian,n=100,K=1,chi=1,C=1"), {8.0});
  EXPECT_NEAR(m.grid[0].value.raw, std::exp(-2.0), 1e-15);
  EXPECT_EQ(m.params.at("threshold"), "30.000000");
  auto wl = evaluate_named_bound("weak-lower", parse_bound_params("a=4,b=0,mean=2"), grid);
  EXPECT_EQ(wl.grid[4].value.raw, 0.0);
  EXPECT_TRUE(wl.grid[4].value.degenerate);
  auto chi = evaluate_named_bound("janson-bernstein", parse_bound_params("chi=5/2,var_sum=4,b=1"), {3.0});
  EXPECT_NEAR(chi.grid[0].value.raw, std::exp(-72.0 / (125.0 * 2.5)), 1e-15);
}

TEST(Registry, Errors) {
  const std::vector<double> grid{0.0, 1.0};
  EXPECT_THROW(evaluate_named_bound("nope", {}, grid), std::invalid_argument);
  EXPECT_THROW(evaluate_named_bound("talagrand-hd", {{"k", "1"}}, grid), std::invalid_argument);
  EXPECT_THROW(evaluate_named_bound("talagrand-hd", {{"k", "1"}, {"l", "1"}, {"x", "1"}}, grid),
               std::invalid_argument);
  EXPECT_THROW(evaluate_named_bound("talagrand-hd", {{"k", "one"}, {"l", "1"}}, grid), std::invalid_argument);
  EXPECT_THROW(evaluate_named_bound("janson-hoeffding", parse_bound_params("chi=1,range_sq_sum=1,range=1,n=1"), grid),
               std::invalid_argument);
  EXPECT_THROW(parse_bound_params("a=1,a=2"), std::invalid_argument);
  EXPECT_THROW(parse_bound_params("a"), std::invalid_argument);
  EXPECT_TRUE(parse_bound_params("").empty());
}
