// Closed-form tail and moment-generating-function bounds for locally
// dependent variables. All evaluators are pure functions of their parameters.
#pragma once

#include "ldconc/rational.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ldconc {

/// A bound evaluation. Raw values above 1 are kept as-is; `capped()` clips.
struct BoundValue {
  double raw = 1.0;
  bool degenerate = false;
  double capped() const { return raw > 1.0 ? 1.0 : raw; }
  bool is_capped() const { return raw > 1.0; }
};

namespace detail {

inline void require_t(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::domain_error("t must be a finite nonnegative number");
}

inline double sum_squares(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) {
    if (x < 0.0) throw std::domain_error("ranges and weights must be nonnegative");
    s += x * x;
  }
  return s;
}

// exp(-num / den) with the 0/0 and x/0 conventions used for degenerate inputs.
inline BoundValue gaussian_tail(double num, double den) {
  if (num == 0.0) return {1.0, den == 0.0};
  if (den == 0.0) return {0.0, true};
  return {std::exp(-num / den), false};
}

}  // namespace detail

/// Hoeffding-type bound for sums of (LD1) variables with ranges b_i - a_i:
/// exp(-2 t^2 / (χ* Σ (b_i - a_i)^2)). The same value bounds the lower tail.
inline BoundValue janson_hoeffding(const Rational& chi_star, std::span<const double> ranges, double t) {
  detail::require_t(t);
  if (chi_star < 1) throw std::domain_error("chi_star must be at least 1");
  const double s = detail::sum_squares(ranges);
  return detail::gaussian_tail(2.0 * t * t, to_double(chi_star) * s);
}

/// Bernstein-type bound: exp(-8 t^2 / (25 χ* (S + b t / 3))), S = Σ Var(X_i),
/// X_i - E X_i <= b.
inline BoundValue janson_bernstein(const Rational& chi_star, double variance_sum, double b, double t) {
  detail::require_t(t);
  if (chi_star < 1) throw std::domain_error("chi_star must be at least 1");
  if (!(b > 0.0)) throw std::domain_error("b must be positive");
  if (variance_sum < 0.0) throw std::domain_error("variance sum must be nonnegative");
  return detail::gaussian_tail(8.0 * t * t, 25.0 * to_double(chi_star) * (variance_sum + b * t / 3.0));
}

/// Parameters of an (a, b)-self-bounding variable Z with mean `mean`.
struct SelfBoundParams {
  double a = 0.0;
  double b = 0.0;
  double mean = 0.0;

  SelfBoundParams() = default;
  SelfBoundParams(double a_, double b_, double mean_) : a(a_), b(b_), mean(mean_) {
    if (a < 0.0 || b < 0.0) throw std::domain_error("a and b must be nonnegative");
  }

  double c() const { return (3.0 * a - 1.0) / 6.0; }
  double c_plus() const { return std::max(c(), 0.0); }
  double c_minus() const { return std::max(-c(), 0.0); }
};

enum class SelfBoundTail { sb_upper, weak_upper, weak_lower };

inline SelfBoundTail parse_self_bound_tail(std::string_view s) {
  if (s == "sb-upper") return SelfBoundTail::sb_upper;
  if (s == "weak-upper") return SelfBoundTail::weak_upper;
  if (s == "weak-lower") return SelfBoundTail::weak_lower;
  throw std::invalid_argument("unknown self-bounding tail '" + std::string(s) + "'");
}

inline BoundValue self_bounding_tail(SelfBoundTail kind, const SelfBoundParams& p, double t) {
  detail::require_t(t);
  const double base = p.a * p.mean + p.b;
  switch (kind) {
    case SelfBoundTail::sb_upper:
      return detail::gaussian_tail(t * t, 2.0 * (base + p.c_plus() * t));
    case SelfBoundTail::weak_upper:
      return detail::gaussian_tail(t * t, 2.0 * (base + p.a * t / 2.0));
    case SelfBoundTail::weak_lower:
      if (t > p.mean) throw std::domain_error("weak-lower tail requires t <= E Z");
      return detail::gaussian_tail(t * t, 2.0 * (base + p.c_minus() * t));
  }
  throw std::logic_error("unreachable");
}

enum class SelfBoundMgf { sb, weak };

/// Upper bound on log E exp(λ (Z - E Z)).
inline double mgf_self_bounding(SelfBoundMgf kind, const SelfBoundParams& p, double lambda) {
  if (!(lambda >= 0.0)) throw std::domain_error("lambda must be nonnegative");
  const double base = p.a * p.mean + p.b;
  double denom = 0.0;
  if (kind == SelfBoundMgf::sb) {
    if (p.c_plus() > 0.0 && lambda >= 1.0 / p.c_plus())
      throw std::domain_error("lambda must be below 1/c_+");
    denom = 1.0 - p.c_plus() * lambda;
  } else {
    if (p.a > 0.0 && lambda > 2.0 / p.a) throw std::domain_error("lambda must be at most 2/a");
    denom = 1.0 - p.a * lambda / 2.0;
    if (denom == 0.0) return lambda == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return base * lambda * lambda / (2.0 * denom);
}

struct McDiarmidBound {
  BoundValue tail;
  std::optional<double> mgf;  // bound on E exp(λ (f - E f))
};

/// Bounded differences under (HD, k, l): tail exp(-2 t^2 / (k l Σ c_i^2)),
/// MGF exp(λ^2 k l Σ c_i^2 / 8). Two-sided.
inline McDiarmidBound mcdiarmid_hd(std::size_t k, std::size_t l, std::span<const double> c, double t,
                                   std::optional<double> lambda = std::nullopt) {
  detail::require_t(t);
  if (k == 0 || l == 0) throw std::domain_error("k and l must be positive");
  const double s = detail::sum_squares(c);
  const double kl = static_cast<double>(k) * static_cast<double>(l);
  McDiarmidBound out;
  out.tail = detail::gaussian_tail(2.0 * t * t, kl * s);
  if (lambda) out.mgf = std::exp((*lambda) * (*lambda) * kl * s / 8.0);
  return out;
}

/// P(X in S) P(d_T(X, S) >= t) <= exp(-t^2 / (10 k l)).
inline BoundValue talagrand_hd(std::size_t k, std::size_t l, double t) {
  detail::require_t(t);
  if (k == 0 || l == 0) throw std::domain_error("k and l must be positive");
  return {std::exp(-t * t / (10.0 * static_cast<double>(k) * static_cast<double>(l))), false};
}

/// Coefficient c in E exp(c d_T^2(X, S)) <= 1 / P(X in S).
inline Rational talagrand_exponent(std::size_t k, std::size_t l) {
  return Rational(1) / Rational(10 * k * l);
}

/// The exponent bookkeeping behind the convex-distance inequality: with
/// λ = 1/(10kl) the log-MGF bound λ E + 4kl λ^2 E / (2 (1 - 2klλ)) equals
/// E / (8kl), exactly cancelling the lower-tail estimate -E / (8kl).
struct TalagrandBudget {
  Rational lambda;
  Rational mgf_coefficient;    // 4kl λ^2 / (2 (1 - 2klλ))
  Rational total_coefficient;  // λ + mgf_coefficient
  Rational lower_tail_coefficient;  // 1 / (8kl)
};

inline TalagrandBudget talagrand_budget(std::size_t k, std::size_t l) {
  const Rational kl(k * l);
  TalagrandBudget b;
  b.lambda = Rational(1) / (10 * kl);
  b.mgf_coefficient = 4 * kl * b.lambda * b.lambda / (2 * (1 - 2 * kl * b.lambda));
  b.total_coefficient = b.lambda + b.mgf_coefficient;
  b.lower_tail_coefficient = Rational(1) / (8 * kl);
  return b;
}

/// Fractional-cover MGF split: (1/χ*) Σ_j w_j M_j, where M_j is the MGF of
/// the j-th restricted function evaluated at θ χ*. Weights must sum to χ*.
inline double subadditive_mgf(const std::vector<std::pair<Rational, double>>& parts,
                              const Rational& chi_star) {
  Rational total = 0;
  double acc = 0.0;
  for (const auto& [w, m] : parts) {
    if (w < 0) throw std::domain_error("cover weights must be nonnegative");
    if (!(m > 0.0)) throw std::domain_error("MGF values must be positive");
    total += w;
    acc += to_double(w) * m;
  }
  if (total != chi_star)
    throw std::invalid_argument("cover weights sum to " + format_rational(total) + ", expected " +
                                format_rational(chi_star));
  return acc / to_double(chi_star);
}

enum class MatrixShape { hermitian, rectangular };

struct MatrixNormBound {
  double threshold = 0.0;  // C χ* K (...) term; presumes centered entries
  BoundValue tail;
  double theta = 0.0;      // minimizer of the Chernoff exponent at t
};

/// Operator-norm tail for matrices with (LD1) entries bounded by K:
///   hermitian:   P(||M|| >= 3 C χ* K √n + t) <= exp(-t^2 / (32 χ*^2 K^2))
///   rectangular: P(||M|| >= C χ* K (√n + √N + (nN)^{1/4}) + t) <= exp(-t^2 / (8 χ*^2 K^2))
/// C is the universal constant of the expected-norm estimate and has no default.
inline MatrixNormBound matrix_norm_tail(MatrixShape shape, std::size_t n, std::optional<std::size_t> N,
                                        double K, const Rational& chi_star, double C, double t) {
  detail::require_t(t);
  if (!(K > 0.0)) throw std::domain_error("K must be positive");
  if (!(C > 0.0)) throw std::domain_error("C must be positive");
  if (chi_star < 1) throw std::domain_error("chi_star must be at least 1");
  const double chi = to_double(chi_star);
  const double dn = static_cast<double>(n);
  MatrixNormBound out;
  if (shape == MatrixShape::hermitian) {
    out.threshold = 3.0 * C * chi * K * std::sqrt(dn);
    out.tail = {std::exp(-t * t / (32.0 * chi * chi * K * K)), false};
    out.theta = t / (16.0 * K * K * chi * chi);
  } else {
    if (!N) throw std::invalid_argument("rectangular shape needs N");
    const double dN = static_cast<double>(*N);
    out.threshold = C * chi * K * (std::sqrt(dn) + std::sqrt(dN) + std::pow(dn * dN, 0.25));
    out.tail = {std::exp(-t * t / (8.0 * chi * chi * K * K)), false};
    out.theta = t / (4.0 * K * K * chi * chi);
  }
  return out;
}

/// P(|λ_s(M) - median| > t) <= 4 exp(-t^2 / (80 s^2 k l)); also for λ_{n-s+1}.
inline BoundValue eigenvalue_tail(std::size_t s, std::size_t k, std::size_t l, double t) {
  detail::require_t(t);
  if (s == 0) throw std::domain_error("eigenvalue index s must be at least 1");
  if (k == 0 || l == 0) throw std::domain_error("k and l must be positive");
  const double ds = static_cast<double>(s);
  return {4.0 * std::exp(-t * t / (80.0 * ds * ds * static_cast<double>(k) * static_cast<double>(l))), false};
}

// ---------------------------------------------------------------------------
// Curves over a t-grid

struct BoundPoint {
  double t = 0.0;
  BoundValue value;
};

struct BoundCurve {
  std::string name;
  std::map<std::string, std::string> params;
  std::vector<BoundPoint> grid;
};

/// Parses "a:b:step" into an inclusive grid. The last point is kept when it
/// lands within step * 1e-9 of b.
inline std::vector<double> parse_t_grid(std::string_view text) {
  std::vector<double> parts;
  std::string s(text);
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(':', start);
    std::string piece = s.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(piece, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed t-grid '" + s + "'");
    }
    if (used != piece.size()) throw std::invalid_argument("malformed t-grid '" + s + "'");
    parts.push_back(v);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (parts.size() != 3) throw std::invalid_argument("t-grid must be a:b:step");
  const double a = parts[0], b = parts[1], step = parts[2];
  if (!(step > 0.0) || b < a || a < 0.0) throw std::invalid_argument("t-grid needs 0 <= a <= b and step > 0");
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double t = a + static_cast<double>(i) * step;
    if (t > b + step * 1e-9) break;
    grid.push_back(t);
    if (grid.size() > 1'000'000) throw std::invalid_argument("t-grid too long");
  }
  return grid;
}

template <class F>
BoundCurve make_curve(std::string name, std::map<std::string, std::string> params,
                      const std::vector<double>& grid, F&& eval) {
  BoundCurve c{std::move(name), std::move(params), {}};
  c.grid.reserve(grid.size());
  for (double t : grid) c.grid.push_back({t, eval(t)});
  return c;
}

}  // namespace ldconc
