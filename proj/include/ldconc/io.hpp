// JSON and CSV formats for graphs, hypergraph structures, covers, tables,
// certificates, ensemble specs and reports.
#pragma once

#include "ldconc/covers.hpp"
#include "ldconc/depstruct.hpp"
#include "ldconc/ensembles.hpp"
#include "ldconc/montecarlo.hpp"
#include "ldconc/rational.hpp"
#include "ldconc/selfbound.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace ldconc {

using json = nlohmann::json;

/// Shortest representation that round-trips; identical on every run.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

namespace detail {

inline const json& require(const json& j, const char* key, const char* what) {
  if (!j.is_object()) throw std::invalid_argument(std::string(what) + " must be a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(std::string(what) + ": missing \"" + key + "\"");
  return *it;
}

inline std::size_t as_count(const json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw std::invalid_argument(std::string(what) + " must be a nonnegative integer");
  return j.get<std::size_t>();
}

inline IndexSet as_index_set(const json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
  IndexSet s;
  for (const auto& v : j) s.push_back(as_count(v, what));
  return s;
}

inline Rational as_rational(const json& j, const char* what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_unsigned()) return Rational(j.get<unsigned long long>());
  if (j.is_number_float()) return parse_rational(format_number(j.get<double>()));
  throw std::invalid_argument(std::string(what) + " must be a number or a \"p/q\" string");
}

inline void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& what) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (auto k : known) ok = ok || it.key() == k;
    if (!ok) throw std::invalid_argument(what + ": unknown key \"" + it.key() + "\"");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Graphs and hypergraph dependence

inline DependencyGraph graph_from_json(const json& j) {
  const std::size_t n = detail::as_count(detail::require(j, "n", "graph"), "graph n");
  const auto& e = detail::require(j, "edges", "graph");
  if (!e.is_array()) throw std::invalid_argument("graph edges must be an array");
  std::vector<DependencyGraph::Edge> edges;
  for (const auto& p : e) {
    if (!p.is_array() || p.size() != 2) throw std::invalid_argument("each edge must be a pair [i, j]");
    edges.emplace_back(detail::as_count(p[0], "edge endpoint"), detail::as_count(p[1], "edge endpoint"));
  }
  return DependencyGraph(n, edges);
}

inline json graph_to_json(const DependencyGraph& g) {
  json edges = json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  return {{"n", g.size()}, {"edges", edges}};
}

inline HyperDependence hd_from_json(const json& j) {
  const std::size_t n = detail::as_count(detail::require(j, "n", "hypergraph"), "hypergraph n");
  const std::size_t N = detail::as_count(detail::require(j, "N", "hypergraph"), "hypergraph N");
  const auto& s = detail::require(j, "S", "hypergraph");
  if (!s.is_array() || s.size() != n) throw std::invalid_argument("hypergraph S must list n source sets");
  std::vector<IndexSet> sets;
  for (const auto& x : s) sets.push_back(detail::as_index_set(x, "source set"));
  return HyperDependence(N, std::move(sets));
}

inline json hd_to_json(const HyperDependence& hd) {
  return {{"n", hd.size()}, {"N", hd.source_count()}, {"S", hd.source_sets()}};
}

// ---------------------------------------------------------------------------
// Covers

inline FractionalCover cover_from_json(const json& j) {
  const std::size_t n = detail::as_count(detail::require(j, "n", "cover"), "cover n");
  const auto& ps = detail::require(j, "parts", "cover");
  if (!ps.is_array()) throw std::invalid_argument("cover parts must be an array");
  std::vector<CoverPart> parts;
  for (const auto& p : ps)
    parts.push_back({detail::as_index_set(detail::require(p, "set", "cover part"), "cover set"),
                     detail::as_rational(detail::require(p, "w", "cover part"), "cover weight")});
  return FractionalCover(n, std::move(parts));
}

inline json cover_to_json(const FractionalCover& c) {
  json parts = json::array();
  for (const auto& p : c.parts()) parts.push_back({{"set", p.set}, {"w", format_rational(p.weight)}});
  return {{"n", c.size()}, {"parts", parts}};
}

inline json rational_to_json(const Rational& r) {
  return {{"exact", format_rational(r)}, {"decimal", to_double(r)}};
}

// ---------------------------------------------------------------------------
// Tables and certificates

template <class T>
T table_value_from_json(const json& j) {
  if constexpr (std::is_floating_point_v<T>) {
    if (j.is_string()) return static_cast<T>(to_double(parse_rational(j.get<std::string>())));
    if (!j.is_number()) throw std::invalid_argument("table values must be numbers");
    return j.get<T>();
  } else {
    return detail::as_rational(j, "table value");
  }
}

template <class T>
json table_value_to_json(const T& v) {
  if constexpr (std::is_floating_point_v<T>) return v;
  else return format_rational(v);
}

template <class T>
TabulatedFunction<T> table_from_json(const json& j) {
  const auto& sz = detail::require(j, "sizes", "table");
  const auto& vs = detail::require(j, "values", "table");
  if (!vs.is_array()) throw std::invalid_argument("table values must be an array");
  std::vector<std::size_t> sizes = detail::as_index_set(sz, "table sizes");
  std::vector<T> values;
  values.reserve(vs.size());
  for (const auto& v : vs) values.push_back(table_value_from_json<T>(v));
  return TabulatedFunction<T>(std::move(sizes), std::move(values));
}

/// α table as {"values": [[α_0, ..., α_{n-1}] per domain point]}.
template <class T>
AlphaTable<T> alpha_from_json(const json& j, const ProductDomain& d) {
  const auto& vs = detail::require(j, "values", "alpha table");
  if (!vs.is_array() || vs.size() != d.size())
    throw std::invalid_argument("alpha table needs one row per domain point");
  AlphaTable<T> a{d.dims(), {}};
  a.values.reserve(d.size() * d.dims());
  for (const auto& row : vs) {
    if (!row.is_array() || row.size() != d.dims()) throw std::invalid_argument("alpha rows need one entry per coordinate");
    for (const auto& v : row) a.values.push_back(table_value_from_json<T>(v));
  }
  return a;
}

template <class T>
json certificate_to_json(const CertificateReport<T>& r) {
  json out{{"variant", std::string(variant_name(r.variant))},
           {"a", table_value_to_json(r.a)},
           {"b", table_value_to_json(r.b)},
           {"holds", r.holds},
           {"worst_violation", table_value_to_json(r.worst_violation)},
           {"condition", r.condition},
           {"witness", r.witness}};
  out["witness_pair"] = r.witness_pair ? json(*r.witness_pair) : json(nullptr);
  return out;
}

// ---------------------------------------------------------------------------
// Ensembles

namespace detail {

class SpecReader {
 public:
  SpecReader(std::string ensemble, const json& params) : name_(std::move(ensemble)), p_(params) {
    if (!p_.is_object()) throw std::invalid_argument("ensemble params must be a JSON object");
  }

  std::size_t count(const char* key, std::optional<std::size_t> dflt = std::nullopt) {
    used_.insert(key);
    auto it = p_.find(key);
    if (it == p_.end()) {
      if (!dflt) throw std::invalid_argument(name_ + ": missing parameter \"" + key + "\"");
      return *dflt;
    }
    return as_count(*it, (name_ + "." + key).c_str());
  }

  double real(const char* key, std::optional<double> dflt = std::nullopt) {
    used_.insert(key);
    auto it = p_.find(key);
    if (it == p_.end()) {
      if (!dflt) throw std::invalid_argument(name_ + ": missing parameter \"" + key + "\"");
      return *dflt;
    }
    if (!it->is_number()) throw std::invalid_argument(name_ + "." + key + " must be a number");
    return it->get<double>();
  }

  std::string text(const char* key, std::string dflt) {
    used_.insert(key);
    auto it = p_.find(key);
    if (it == p_.end()) return dflt;
    if (!it->is_string()) throw std::invalid_argument(name_ + "." + key + " must be a string");
    return it->get<std::string>();
  }

  void finish() const {
    for (auto it = p_.begin(); it != p_.end(); ++it)
      if (!used_.count(it.key())) throw std::invalid_argument(name_ + ": unknown parameter \"" + it.key() + "\"");
  }

 private:
  std::string name_;
  const json& p_;
  std::set<std::string> used_;
};

}  // namespace detail

inline const std::vector<std::string>& ensemble_names() {
  static const std::vector<std::string> names{"counterexample", "m-dependent",   "er-triangles",
                                              "hd-symmetric",   "ld1-hermitian", "iid-sign"};
  return names;
}

/// Builds an ensemble from {"name": ..., "params": {...}}.
///   counterexample  n
///   m-dependent     n, m, family=window-sum|window-xor|window-max, law=sign|uniform
///   er-triangles    n, p
///   hd-symmetric    n, pattern=iid|row-block-sign, width, law=sign|uniform
///   ld1-hermitian   n, pattern=iid|paired, K
///   iid-sign        n
inline std::unique_ptr<Ensemble> make_ensemble(const json& spec) {
  const auto& name_j = detail::require(spec, "name", "ensemble spec");
  if (!name_j.is_string()) throw std::invalid_argument("ensemble name must be a string");
  detail::reject_unknown(spec, {"name", "params"}, "ensemble spec");
  const std::string name = name_j.get<std::string>();
  static const json empty = json::object();
  const json& params = spec.contains("params") ? spec["params"] : empty;
  detail::SpecReader r(name, params);
  std::unique_ptr<Ensemble> e;
  if (name == "counterexample") {
    e = std::make_unique<CounterexampleEnsemble>(r.count("n"));
  } else if (name == "m-dependent") {
    const auto n = r.count("n"), m = r.count("m");
    const auto family = parse_window_family(r.text("family", "window-sum"));
    const auto law = parse_source_law(r.text("law", "sign"));
    e = std::make_unique<MDependentEnsemble>(n, m, family, law);
  } else if (name == "er-triangles") {
    const auto n = r.count("n");
    e = std::make_unique<ErTriangleEnsemble>(n, r.real("p"));
  } else if (name == "hd-symmetric") {
    const auto n = r.count("n");
    auto pattern = r.text("pattern", "iid");
    const auto width = r.count("width", 1);
    const auto law = parse_entry_law(r.text("law", "sign"));
    e = std::make_unique<HdSymmetricEnsemble>(n, std::move(pattern), width, law);
  } else if (name == "ld1-hermitian") {
    const auto n = r.count("n");
    auto pattern = r.text("pattern", "iid");
    e = std::make_unique<Ld1HermitianEnsemble>(n, std::move(pattern), r.real("K", 1.0));
  } else if (name == "iid-sign") {
    e = std::make_unique<IidSignEnsemble>(r.count("n"));
  } else {
    std::string known;
    for (const auto& k : ensemble_names()) known += (known.empty() ? "" : ", ") + k;
    throw std::invalid_argument("unknown ensemble '" + name + "' (known: " + known + ")");
  }
  r.finish();
  return e;
}

inline json realization_to_json(const Ensemble& e, std::uint64_t seed, std::uint64_t replica = 0) {
  json out{{"ensemble", e.name()}, {"seed", seed}, {"replica", replica}, {"x", e.realization(seed, replica)}};
  if (auto n = e.matrix_order()) {
    const auto m = symmetric_from_upper(*n, out["x"].get<std::vector<double>>());
    json rows = json::array();
    for (std::size_t i = 0; i < *n; ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < *n; ++j) row.push_back(m(i, j));
      rows.push_back(row);
    }
    out["matrix"] = rows;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports

inline std::string side_name(TailSide s) {
  switch (s) {
    case TailSide::upper: return "upper";
    case TailSide::lower: return "lower";
    case TailSide::absolute: return "absolute";
  }
  return "?";
}

/// CSV with columns t, p_hat, ci_low, ci_high, bound_raw, bound_capped, verdict.
/// Without a comparison the bound columns are empty and verdict is "NA".
inline std::string report_to_csv(const SimulationReport& rep, const Comparison* cmp) {
  std::ostringstream os;
  os << "t,p_hat,ci_low,ci_high,bound_raw,bound_capped,verdict\n";
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    os << format_number(r.t) << ',' << format_number(r.p_hat) << ',' << format_number(r.ci.low) << ','
       << format_number(r.ci.high) << ',';
    if (cmp) {
      const auto& c = cmp->rows.at(i);
      os << format_number(c.bound_raw) << ',' << format_number(c.bound_capped) << ',' << (c.pass ? "PASS" : "FAIL");
    } else {
      os << ",,NA";
    }
    os << '\n';
  }
  return os.str();
}

inline json report_to_json(const SimulationReport& rep, const BoundCurve* curve, const Comparison* cmp) {
  json rows = json::array();
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    json row{{"t", r.t}, {"count", r.count}, {"p_hat", r.p_hat}, {"ci_low", r.ci.low}, {"ci_high", r.ci.high}};
    if (cmp) {
      const auto& c = cmp->rows.at(i);
      row["bound_raw"] = c.bound_raw;
      row["bound_capped"] = c.bound_capped;
      row["verdict"] = c.pass ? "PASS" : "FAIL";
    }
    rows.push_back(row);
  }
  json out{{"ensemble", rep.ensemble},
           {"statistic", rep.statistic},
           {"replicas", rep.replicas},
           {"seed", rep.seed},
           {"ci_level", rep.ci_level},
           {"centering", {{"mode", rep.centering.label()}, {"center", rep.center}}},
           {"side", side_name(rep.side)},
           {"rows", rows}};
  if (curve) out["bound"] = {{"name", curve->name}, {"params", curve->params}};
  out["verdict"] = cmp ? (cmp->pass ? "PASS" : "FAIL") : "NA";
  return out;
}

/// Curve as CSV with columns t, raw, capped.
inline std::string curve_to_csv(const BoundCurve& c) {
  std::ostringstream os;
  os << "t,raw,capped\n";
  for (const auto& p : c.grid)
    os << format_number(p.t) << ',' << format_number(p.value.raw) << ',' << format_number(p.value.capped()) << '\n';
  return os.str();
}

inline json curve_to_json(const BoundCurve& c) {
  json pts = json::array();
  for (const auto& p : c.grid)
    pts.push_back({{"t", p.t}, {"raw", p.value.raw}, {"capped", p.value.capped()}, {"degenerate", p.value.degenerate}});
  return {{"name", c.name}, {"params", c.params}, {"grid", pts}};
}

}  // namespace ldconc
