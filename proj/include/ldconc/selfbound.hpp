// Brute-force certification of self-bounding properties on finite product
// domains, the hypergraph-dependence lift, and Talagrand's convex distance.
//
// Everything is templated on the value type: `double` for irrational tables
// (compared with an absolute tolerance) or `Rational` for exact checks.
#pragma once

#include "ldconc/depstruct.hpp"
#include "ldconc/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

namespace ldconc {

inline constexpr std::size_t kMaxTableSize = std::size_t{1} << 22;
inline constexpr std::size_t kMaxHullPatterns = 8;

using Point = std::vector<std::size_t>;

/// Mixed-radix product domain Λ_0 × ... × Λ_{n-1}, last coordinate fastest.
class ProductDomain {
 public:
  ProductDomain() = default;

  explicit ProductDomain(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
    strides_.assign(sizes_.size(), 1);
    std::size_t total = 1;
    for (std::size_t i = sizes_.size(); i-- > 0;) {
      if (sizes_[i] == 0) throw std::invalid_argument("empty coordinate alphabet");
      strides_[i] = total;
      if (total > kMaxTableSize / sizes_[i])
        throw std::length_error("product domain exceeds the table cap");
      total *= sizes_[i];
    }
    total_ = total;
  }

  std::size_t dims() const { return sizes_.size(); }
  std::size_t size() const { return total_; }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  std::size_t stride(std::size_t i) const { return strides_[i]; }

  std::size_t coord(std::size_t index, std::size_t i) const { return (index / strides_[i]) % sizes_[i]; }

  Point point(std::size_t index) const {
    Point p(sizes_.size());
    for (std::size_t i = 0; i < sizes_.size(); ++i) p[i] = coord(index, i);
    return p;
  }

  std::size_t index(const Point& p) const {
    if (p.size() != sizes_.size()) throw std::invalid_argument("point dimension mismatch");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] >= sizes_[i]) throw std::invalid_argument("point coordinate out of range");
      idx += p[i] * strides_[i];
    }
    return idx;
  }

  /// Index of the point obtained by setting coordinate i of `index` to `value`.
  std::size_t with(std::size_t index, std::size_t i, std::size_t value) const {
    return index - coord(index, i) * strides_[i] + value * strides_[i];
  }

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

template <class T>
class TabulatedFunction {
 public:
  TabulatedFunction() = default;

  TabulatedFunction(std::vector<std::size_t> sizes, std::vector<T> values)
      : domain_(std::move(sizes)), values_(std::move(values)) {
    if (values_.size() != domain_.size())
      throw std::invalid_argument("table has " + std::to_string(values_.size()) +
                                  " values, domain needs " + std::to_string(domain_.size()));
    if constexpr (std::is_floating_point_v<T>) {
      for (const auto& v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("table value is not finite");
    }
  }

  template <class F>
  static TabulatedFunction from(std::vector<std::size_t> sizes, F&& fn) {
    ProductDomain d(sizes);
    std::vector<T> values;
    values.reserve(d.size());
    for (std::size_t idx = 0; idx < d.size(); ++idx) values.push_back(fn(d.point(idx)));
    return TabulatedFunction(std::move(sizes), std::move(values));
  }

  const ProductDomain& domain() const { return domain_; }
  const std::vector<T>& values() const { return values_; }
  const T& operator[](std::size_t index) const { return values_[index]; }
  const T& at(const Point& p) const { return values_[domain_.index(p)]; }

 private:
  ProductDomain domain_;
  std::vector<T> values_;
};

/// g_i(x_{-i}) = min over x_i' of f(x with coordinate i set to x_i').
/// Returned table i lives on the domain with coordinate i removed.
template <class T>
std::vector<TabulatedFunction<T>> inf_marginals(const TabulatedFunction<T>& f) {
  const auto& d = f.domain();
  std::vector<TabulatedFunction<T>> out;
  for (std::size_t i = 0; i < d.dims(); ++i) {
    std::vector<std::size_t> sizes = d.sizes();
    sizes.erase(sizes.begin() + static_cast<std::ptrdiff_t>(i));
    ProductDomain sub(sizes);
    std::vector<T> values(sub.size());
    std::vector<bool> set(sub.size(), false);
    for (std::size_t idx = 0; idx < d.size(); ++idx) {
      const std::size_t sub_idx = (idx / (d.stride(i) * d.sizes()[i])) * d.stride(i) + idx % d.stride(i);
      if (!set[sub_idx] || f[idx] < values[sub_idx]) {
        values[sub_idx] = f[idx];
        set[sub_idx] = true;
      }
    }
    out.emplace_back(std::move(sizes), std::move(values));
  }
  return out;
}

namespace detail {

// decrement[idx * n + i] = f(x) - g_i(x_{-i}) with the infimum choice of g_i.
template <class T>
std::vector<T> decrements(const TabulatedFunction<T>& f) {
  const auto& d = f.domain();
  const std::size_t n = d.dims();
  std::vector<T> dec(d.size() * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t idx = 0; idx < d.size(); ++idx) {
      if (d.coord(idx, i) != 0) continue;
      T lo = f[idx];
      for (std::size_t v = 1; v < d.sizes()[i]; ++v) lo = std::min(lo, f[d.with(idx, i, v)]);
      for (std::size_t v = 0; v < d.sizes()[i]; ++v) {
        const std::size_t j = d.with(idx, i, v);
        dec[j * n + i] = f[j] - lo;
      }
    }
  }
  return dec;
}

}  // namespace detail

enum class SelfBoundingVariant { sb, weak_sb, alpha_sb, weak_alpha_sb };

inline std::string_view variant_name(SelfBoundingVariant v) {
  switch (v) {
    case SelfBoundingVariant::sb: return "sb";
    case SelfBoundingVariant::weak_sb: return "weak-sb";
    case SelfBoundingVariant::alpha_sb: return "alpha-sb";
    case SelfBoundingVariant::weak_alpha_sb: return "weak-alpha-sb";
  }
  return "?";
}

inline SelfBoundingVariant parse_variant(std::string_view s) {
  if (s == "sb") return SelfBoundingVariant::sb;
  if (s == "weak-sb") return SelfBoundingVariant::weak_sb;
  if (s == "alpha-sb") return SelfBoundingVariant::alpha_sb;
  if (s == "weak-alpha-sb") return SelfBoundingVariant::weak_alpha_sb;
  throw std::invalid_argument("unknown self-bounding variant '" + std::string(s) + "'");
}

inline bool uses_alpha(SelfBoundingVariant v) {
  return v == SelfBoundingVariant::alpha_sb || v == SelfBoundingVariant::weak_alpha_sb;
}

/// α(x) ∈ R_+^n for every point x: values[index * n + i].
template <class T>
struct AlphaTable {
  std::size_t dims = 0;
  std::vector<T> values;
  const T& operator()(std::size_t index, std::size_t i) const { return values[index * dims + i]; }
};

template <class T>
struct CertificateReport {
  SelfBoundingVariant variant = SelfBoundingVariant::sb;
  T a{};
  T b{};
  bool holds = false;
  /// max over all checked inequalities of (lhs - rhs); <= 0 means satisfied.
  T worst_violation{};
  /// Which inequality attains worst_violation.
  std::string condition;
  Point witness;
  std::optional<Point> witness_pair;
};

template <class T>
T default_tolerance() {
  if constexpr (std::is_floating_point_v<T>) return T(1e-12);
  else return T(0);
}

/// Exhaustively checks the defining inequalities of `variant` with
/// g_i chosen as the infimum marginal.
template <class T>
CertificateReport<T> certify(const TabulatedFunction<T>& f, SelfBoundingVariant variant, const std::type_identity_t<T>& a,
                             const std::type_identity_t<T>& b,
                             const std::type_identity_t<AlphaTable<T>>* alpha = nullptr,
                             const std::type_identity_t<T>& tolerance = default_tolerance<T>()) {
  if (a < 0 || b < 0) throw std::invalid_argument("a and b must be nonnegative");
  const auto& d = f.domain();
  const std::size_t n = d.dims();
  if (n == 0) throw std::invalid_argument("function has no coordinates");
  if (uses_alpha(variant)) {
    if (!alpha) throw std::invalid_argument("alpha table required for " + std::string(variant_name(variant)));
    if (alpha->dims != n || alpha->values.size() != d.size() * n)
      throw std::invalid_argument("alpha table shape mismatch");
  }

  CertificateReport<T> rep;
  rep.variant = variant;
  rep.a = a;
  rep.b = b;
  bool first = true;
  auto consider = [&](const T& v, const char* cond, std::size_t x, std::optional<std::size_t> y) {
    if (first || v > rep.worst_violation) {
      first = false;
      rep.worst_violation = v;
      rep.condition = cond;
      rep.witness = d.point(x);
      rep.witness_pair = y ? std::optional<Point>(d.point(*y)) : std::nullopt;
    }
  };

  if (!uses_alpha(variant)) {
    const auto dec = detail::decrements(f);
    for (std::size_t x = 0; x < d.size(); ++x) {
      T sum = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const T& di = dec[x * n + i];
        if (variant == SelfBoundingVariant::sb) {
          consider(di - T(1), "decrement<=1", x, std::nullopt);
          consider(-di, "decrement>=0", x, std::nullopt);
          sum += di;
        } else {
          sum += di * di;
        }
      }
      const T rhs = a * f[x] + b;
      consider(sum - rhs, variant == SelfBoundingVariant::sb ? "sum<=af+b" : "sumsq<=af+b", x,
               std::nullopt);
    }
  } else {
    for (std::size_t x = 0; x < d.size(); ++x) {
      T sum = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const T& ai = (*alpha)(x, i);
        consider(-ai, "alpha>=0", x, std::nullopt);
        if (variant == SelfBoundingVariant::alpha_sb) {
          consider(ai - T(1), "alpha<=1", x, std::nullopt);
          sum += ai;
        } else {
          sum += ai * ai;
        }
      }
      const T rhs = a * f[x] + b;
      consider(sum - rhs, variant == SelfBoundingVariant::alpha_sb ? "sum-alpha<=af+b" : "sumsq-alpha<=af+b",
               x, std::nullopt);
      for (std::size_t y = 0; y < d.size(); ++y) {
        T budget = 0;
        for (std::size_t i = 0; i < n; ++i)
          if (d.coord(x, i) != d.coord(y, i)) budget += (*alpha)(x, i);
        consider(f[x] - f[y] - budget, "two-point", x, y);
      }
    }
  }
  rep.holds = rep.worst_violation <= tolerance;
  return rep;
}

/// Maps each observed variable X_i to a symbol of Λ_i from its sources
/// Y_{S_i} (sorted order, mixed radix, last source fastest).
struct SourceMap {
  std::vector<std::size_t> table;
};

template <class T>
struct LiftResult {
  TabulatedFunction<T> h;
  HdParams params;
};

/// h(y) = f(x(y)) / l on the source domain.
template <class T>
LiftResult<T> hd_lift(const TabulatedFunction<T>& f, const HyperDependence& hd,
                      const std::vector<std::size_t>& source_sizes, const std::vector<SourceMap>& maps) {
  const auto& xd = f.domain();
  if (xd.dims() != hd.size()) throw std::invalid_argument("function arity does not match hd.n");
  if (source_sizes.size() != hd.source_count()) throw std::invalid_argument("source alphabet count != N");
  if (maps.size() != hd.size()) throw std::invalid_argument("need one source map per variable");
  for (std::size_t i = 0; i < hd.size(); ++i) {
    std::size_t expect = 1;
    for (auto j : hd.sources_of(i)) expect *= source_sizes[j];
    if (maps[i].table.size() != expect)
      throw std::invalid_argument("source map " + std::to_string(i) + " has wrong size");
    for (auto v : maps[i].table)
      if (v >= xd.sizes()[i]) throw std::invalid_argument("source map " + std::to_string(i) + " leaves Λ_i");
  }

  LiftResult<T> out;
  out.params = hd_params(hd);
  const T l = T(out.params.l);
  ProductDomain yd(source_sizes);
  std::vector<T> values;
  values.reserve(yd.size());
  Point x(hd.size());
  for (std::size_t y = 0; y < yd.size(); ++y) {
    for (std::size_t i = 0; i < hd.size(); ++i) {
      std::size_t local = 0;
      for (auto j : hd.sources_of(i)) local = local * source_sizes[j] + yd.coord(y, j);
      x[i] = maps[i].table[local];
    }
    values.push_back(f.at(x) / l);
  }
  out.h = TabulatedFunction<T>(source_sizes, std::move(values));
  return out;
}

/// Largest change of f under a single-coordinate move.
template <class T>
T max_single_coordinate_change(const TabulatedFunction<T>& f) {
  const auto& d = f.domain();
  T worst = 0;
  for (std::size_t i = 0; i < d.dims(); ++i) {
    for (std::size_t idx = 0; idx < d.size(); ++idx) {
      if (d.coord(idx, i) != 0) continue;
      T lo = f[idx], hi = f[idx];
      for (std::size_t v = 1; v < d.sizes()[i]; ++v) {
        lo = std::min(lo, f[d.with(idx, i, v)]);
        hi = std::max(hi, f[d.with(idx, i, v)]);
      }
      worst = std::max(worst, T(hi - lo));
    }
  }
  return worst;
}

template <class T>
struct TransferReport {
  CertificateReport<T> premise;
  /// Certificate for h with parameters (k a, (k/l) b).
  CertificateReport<T> conclusion;
  /// Largest single-coordinate change of h (the weak variant also claims <= 1).
  T h_max_change{};
  /// premise.holds implies conclusion.holds.
  bool implication_holds() const { return !premise.holds || conclusion.holds; }
};

/// Checks an α-premise on f and the matching self-bounding conclusion on the lift.
template <class T>
TransferReport<T> hd_transfer(const TabulatedFunction<T>& f, const AlphaTable<T>& alpha,
                              SelfBoundingVariant premise_variant, const T& a, const T& b,
                              const HyperDependence& hd, const std::vector<std::size_t>& source_sizes,
                              const std::vector<SourceMap>& maps,
                              const T& tolerance = default_tolerance<T>()) {
  if (!uses_alpha(premise_variant)) throw std::invalid_argument("transfer premise must be an alpha variant");
  TransferReport<T> rep;
  rep.premise = certify(f, premise_variant, a, b, &alpha, tolerance);
  auto lift = hd_lift(f, hd, source_sizes, maps);
  const T k = T(lift.params.k);
  const T l = T(lift.params.l);
  const auto conclusion_variant = premise_variant == SelfBoundingVariant::alpha_sb
                                      ? SelfBoundingVariant::sb
                                      : SelfBoundingVariant::weak_sb;
  rep.conclusion = certify(lift.h, conclusion_variant, T(k * a), T(k * b / l), nullptr, tolerance);
  rep.h_max_change = max_single_coordinate_change(lift.h);
  return rep;
}

// ---------------------------------------------------------------------------
// Talagrand convex distance

struct ConvexDistance {
  /// d_T(x, S)^2, exact.
  Rational squared;
  /// Minimum-norm point of the hull of difference patterns.
  std::vector<Rational> hull_point;
  double value() const { return std::sqrt(to_double(squared)); }
};

namespace detail {

// Solves [G 1; 1^T 0][lam; mu] = [0; 1]. Empty optional when singular.
inline std::optional<std::vector<Rational>> solve_kkt(const std::vector<std::vector<Rational>>& G) {
  const std::size_t m = G.size();
  std::vector<std::vector<Rational>> A(m + 1, std::vector<Rational>(m + 2, Rational(0)));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) A[r][c] = G[r][c];
    A[r][m] = 1;
  }
  for (std::size_t c = 0; c < m; ++c) A[m][c] = 1;
  A[m][m + 1] = 1;
  for (std::size_t col = 0; col <= m; ++col) {
    std::size_t piv = col;
    while (piv <= m && A[piv][col] == 0) ++piv;
    if (piv > m) return std::nullopt;
    std::swap(A[piv], A[col]);
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == col || A[r][col] == 0) continue;
      const Rational t = A[r][col] / A[col][col];
      for (std::size_t c = col; c <= m + 1; ++c) A[r][c] -= t * A[col][c];
    }
  }
  std::vector<Rational> lam(m);
  for (std::size_t r = 0; r < m; ++r) lam[r] = A[r][m + 1] / A[r][r];
  return lam;
}

}  // namespace detail

/// Minimum Euclidean norm over the convex hull of {(1[x_i != y_i])_i : y in S}.
/// Exact active-set enumeration over faces; dominated patterns are pruned
/// first, and at most kMaxHullPatterns minimal patterns are accepted.
inline ConvexDistance convex_distance_squared(const Point& x, const std::vector<Point>& S) {
  if (S.empty()) throw std::invalid_argument("convex distance to an empty set");
  const std::size_t n = x.size();
  std::vector<std::vector<std::uint8_t>> patterns;
  for (const auto& y : S) {
    if (y.size() != n) throw std::invalid_argument("point dimension mismatch");
    std::vector<std::uint8_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = x[i] != y[i];
    patterns.push_back(std::move(p));
  }
  std::sort(patterns.begin(), patterns.end());
  patterns.erase(std::unique(patterns.begin(), patterns.end()), patterns.end());

  auto dominated_by = [&](const std::vector<std::uint8_t>& big, const std::vector<std::uint8_t>& small) {
    for (std::size_t i = 0; i < n; ++i)
      if (small[i] > big[i]) return false;
    return true;
  };
  std::vector<std::vector<std::uint8_t>> minimal;
  for (std::size_t a = 0; a < patterns.size(); ++a) {
    bool keep = true;
    for (std::size_t b = 0; b < patterns.size() && keep; ++b)
      if (a != b && dominated_by(patterns[a], patterns[b])) keep = false;
    if (keep) minimal.push_back(patterns[a]);
  }

  ConvexDistance out;
  out.hull_point.assign(n, Rational(0));
  if (minimal.size() == 1 && std::all_of(minimal[0].begin(), minimal[0].end(), [](auto v) { return v == 0; })) {
    out.squared = 0;
    return out;
  }
  const std::size_t m = minimal.size();
  if (m > kMaxHullPatterns)
    throw std::length_error("convex distance needs " + std::to_string(m) +
                            " minimal patterns, above the limit of " + std::to_string(kMaxHullPatterns));

  std::vector<std::vector<Rational>> gram(m, std::vector<Rational>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      long dot = 0;
      for (std::size_t i = 0; i < n; ++i) dot += minimal[a][i] * minimal[b][i];
      gram[a][b] = dot;
    }

  bool found = false;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<std::size_t> members;
    for (std::size_t a = 0; a < m; ++a)
      if (mask & (1u << a)) members.push_back(a);
    std::vector<std::vector<Rational>> sub(members.size(), std::vector<Rational>(members.size()));
    for (std::size_t r = 0; r < members.size(); ++r)
      for (std::size_t c = 0; c < members.size(); ++c) sub[r][c] = gram[members[r]][members[c]];
    auto lam = detail::solve_kkt(sub);
    if (!lam) continue;
    if (std::any_of(lam->begin(), lam->end(), [](const Rational& v) { return v < 0; })) continue;
    Rational val = 0;
    for (std::size_t r = 0; r < members.size(); ++r)
      for (std::size_t c = 0; c < members.size(); ++c) val += (*lam)[r] * (*lam)[c] * sub[r][c];
    if (!found || val < out.squared) {
      found = true;
      out.squared = val;
      std::fill(out.hull_point.begin(), out.hull_point.end(), Rational(0));
      for (std::size_t r = 0; r < members.size(); ++r)
        for (std::size_t i = 0; i < n; ++i)
          if (minimal[members[r]][i]) out.hull_point[i] += (*lam)[r];
    }
  }
  return out;
}

/// Closed form for S = {y : #{i : y_i != center_i} <= radius}: with
/// d = #{i : x_i != center_i}, d_T^2 = (d - radius)^2 / d when d > radius.
inline Rational convex_distance_squared_to_hamming_ball(const Point& x, const Point& center,
                                                        std::size_t radius) {
  if (x.size() != center.size()) throw std::invalid_argument("point dimension mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d += x[i] != center[i];
  if (d <= radius) return Rational(0);
  const Rational excess(d - radius);
  return excess * excess / Rational(d);
}

/// Certifies that x -> d_T^2(x, S) is weakly α-(4, 0) self-bounding on the
/// given product domain, with α(x) = 2 × (minimum-norm hull point at x).
inline CertificateReport<Rational> certify_dt_squared(const std::vector<std::size_t>& sizes,
                                                      const std::vector<Point>& S) {
  ProductDomain d(sizes);
  std::vector<Rational> values;
  AlphaTable<Rational> alpha{d.dims(), {}};
  values.reserve(d.size());
  alpha.values.reserve(d.size() * d.dims());
  for (std::size_t idx = 0; idx < d.size(); ++idx) {
    auto cd = convex_distance_squared(d.point(idx), S);
    values.push_back(cd.squared);
    for (auto& v : cd.hull_point) alpha.values.push_back(2 * v);
  }
  TabulatedFunction<Rational> f(sizes, std::move(values));
  return certify(f, SelfBoundingVariant::weak_alpha_sb, Rational(4), Rational(0), &alpha);
}

}  // namespace ldconc
