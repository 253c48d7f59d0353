// Bound curves by name, parameterised by string key/value pairs. This is the
// layer shared by the `bound` subcommand and experiment configs.
#pragma once

#include "ldconc/bounds.hpp"
#include "ldconc/rational.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ldconc {

using BoundParams = std::map<std::string, std::string>;

/// Parses "k=v,k=v". Keys must be unique and nonempty.
inline BoundParams parse_bound_params(std::string_view text) {
  BoundParams out;
  std::size_t start = 0;
  while (start <= text.size() && !text.empty()) {
    auto end = text.find(',', start);
    auto item = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) throw std::invalid_argument("malformed parameter '" + std::string(item) + "'");
    std::string key(item.substr(0, eq));
    if (!out.emplace(key, std::string(item.substr(eq + 1))).second)
      throw std::invalid_argument("duplicate parameter '" + key + "'");
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

namespace detail {

class ParamReader {
 public:
  ParamReader(std::string bound, const BoundParams& p) : bound_(std::move(bound)), p_(p) {}

  bool has(const std::string& key) const { return p_.count(key) != 0; }

  const std::string& raw(const std::string& key) {
    auto it = p_.find(key);
    if (it == p_.end()) throw std::invalid_argument(bound_ + ": missing parameter '" + key + "'");
    used_.insert(key);
    return it->second;
  }

  double real(const std::string& key) {
    const auto& s = raw(key);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      // Accept exact fractions such as "5/2" as well.
      try {
        return to_double(parse_rational(s));
      } catch (const std::exception&) {
        throw std::invalid_argument(bound_ + ": parameter '" + key + "' is not a number");
      }
    }
    return v;
  }

  Rational rational(const std::string& key) {
    try {
      return parse_rational(raw(key));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument(bound_ + ": parameter '" + key + "' is not a rational number");
    }
  }

  std::size_t count(const std::string& key) {
    const auto& s = raw(key);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw std::invalid_argument(bound_ + ": parameter '" + key + "' is not a nonnegative integer");
    return v;
  }

  /// Σ x_i² given either `<sq_key>` directly or `n` and a common value `<key>`.
  double sum_of_squares(const std::string& sq_key, const std::string& key) {
    if (has(sq_key)) {
      if (has(key)) throw std::invalid_argument(bound_ + ": give either '" + sq_key + "' or n and '" + key + "'");
      const double s = real(sq_key);
      if (s < 0.0) throw std::invalid_argument(bound_ + ": '" + sq_key + "' must be nonnegative");
      return s;
    }
    const double n = static_cast<double>(count("n"));
    const double v = real(key);
    return n * v * v;
  }

  /// Rejects keys that no evaluator consumed.
  void finish() const {
    for (const auto& [k, v] : p_)
      if (!used_.count(k)) throw std::invalid_argument(bound_ + ": unknown parameter '" + k + "'");
  }

 private:
  std::string bound_;
  const BoundParams& p_;
  std::set<std::string> used_;
};

}  // namespace detail

inline const std::vector<std::string>& bound_names() {
  static const std::vector<std::string> names{"janson-hoeffding", "janson-bernstein", "sb-upper",   "weak-upper",
                                              "weak-lower",       "mcdiarmid-hd",     "talagrand-hd", "matrix-norm",
                                              "eigenvalue"};
  return names;
}

/// Parameters per bound:
///   janson-hoeffding  chi, and range_sq_sum or (n, range)
///   janson-bernstein  chi, var_sum, b
///   sb-upper, weak-upper, weak-lower  a, b, mean
///   mcdiarmid-hd      k, l, and c_sq_sum or (n, c)
///   talagrand-hd      k, l
///   matrix-norm       shape=hermitian|rectangular, n, [N], K, chi, C
///   eigenvalue        s, k, l
/// weak-lower is reported as 0 (flagged degenerate) for t > mean, where the
/// event {Z <= E Z - t} is empty for a nonnegative Z.
inline BoundCurve evaluate_named_bound(const std::string& name, const BoundParams& params,
                                       const std::vector<double>& grid) {
  detail::ParamReader r(name, params);
  BoundCurve curve;
  if (name == "janson-hoeffding") {
    const Rational chi = r.rational("chi");
    const double s = r.sum_of_squares("range_sq_sum", "range");
    r.finish();
    // One variable whose squared range carries the whole sum.
    const double range = std::sqrt(s);
    curve = make_curve(name, params, grid, [&](double t) { return janson_hoeffding(chi, {&range, 1}, t); });
  } else if (name == "janson-bernstein") {
    const Rational chi = r.rational("chi");
    const double v = r.real("var_sum"), b = r.real("b");
    r.finish();
    curve = make_curve(name, params, grid, [&](double t) { return janson_bernstein(chi, v, b, t); });
  } else if (name == "sb-upper" || name == "weak-upper" || name == "weak-lower") {
    const SelfBoundParams p(r.real("a"), r.real("b"), r.real("mean"));
    r.finish();
    const auto kind = parse_self_bound_tail(name);
    curve = make_curve(name, params, grid, [&](double t) {
      if (kind == SelfBoundTail::weak_lower && t > p.mean) return BoundValue{0.0, true};
      return self_bounding_tail(kind, p, t);
    });
  } else if (name == "mcdiarmid-hd") {
    const std::size_t k = r.count("k"), l = r.count("l");
    const double s = r.sum_of_squares("c_sq_sum", "c");
    r.finish();
    const double c = std::sqrt(s);
    curve = make_curve(name, params, grid, [&](double t) { return mcdiarmid_hd(k, l, {&c, 1}, t).tail; });
  } else if (name == "talagrand-hd") {
    const std::size_t k = r.count("k"), l = r.count("l");
    r.finish();
    curve = make_curve(name, params, grid, [&](double t) { return talagrand_hd(k, l, t); });
  } else if (name == "matrix-norm") {
    const std::string shape_name = r.raw("shape");
    MatrixShape shape;
    if (shape_name == "hermitian") shape = MatrixShape::hermitian;
    else if (shape_name == "rectangular") shape = MatrixShape::rectangular;
    else throw std::invalid_argument("matrix-norm: shape must be hermitian or rectangular");
    const std::size_t n = r.count("n");
    std::optional<std::size_t> N;
    if (r.has("N")) N = r.count("N");
    const double K = r.real("K");
    const Rational chi = r.rational("chi");
    const double C = r.real("C");
    r.finish();
    curve = make_curve(name, params, grid, [&](double t) { return matrix_norm_tail(shape, n, N, K, chi, C, t).tail; });
    curve.params["threshold"] = std::to_string(matrix_norm_tail(shape, n, N, K, chi, C, 0.0).threshold);
  } else if (name == "eigenvalue") {
    const std::size_t s = r.count("s"), k = r.count("k"), l = r.count("l");
    r.finish();
    curve = make_curve(name, params, grid, [&](double t) { return eigenvalue_tail(s, k, l, t); });
  } else {
    std::string known;
    for (const auto& n : bound_names()) known += (known.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown bound '" + name + "' (known: " + known + ")");
  }
  return curve;
}

}  // namespace ldconc
