// Experiment configs: one ensemble, one statistic, a t-grid, and optionally a
// bound to compare against. Everything is validated before any sampling.
#pragma once

#include "ldconc/covers.hpp"
#include "ldconc/io.hpp"
#include "ldconc/montecarlo.hpp"
#include "ldconc/registry.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ldconc {

/// Thrown for any problem with a config; maps to exit status 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ExperimentMode { tail, median_deviation };

struct BoundSelection {
  std::string name;
  /// Values are literals or "declared" / "computed" (see resolve_bound_params).
  json params = json::object();
};

struct ExperimentConfig {
  json ensemble;
  std::string statistic;
  ExperimentMode mode = ExperimentMode::tail;
  std::size_t eigen_index = 1;
  bool lower_end = false;
  Centering centering = Centering::sample_mean();
  TailSide side = TailSide::upper;
  std::string t_grid_text;
  std::vector<double> t_grid;
  std::size_t replicas = 100000;
  std::uint64_t seed = 1;
  double ci_level = 0.99;
  std::optional<BoundSelection> bound;
};

namespace detail {

inline TailSide parse_side(const std::string& s) {
  if (s == "upper") return TailSide::upper;
  if (s == "lower") return TailSide::lower;
  if (s == "absolute") return TailSide::absolute;
  throw ConfigError("side must be upper, lower, or absolute");
}

}  // namespace detail

/// Parses and validates a config object. Unknown keys are errors.
///   ensemble    {"name", "params"}                       required
///   statistic   name defined by the ensemble             required in tail mode
///   mode        "tail" | "median-deviation"              default tail
///   eigen_index s >= 1 (median-deviation)                default 1
///   lower_end   use λ_{n-s+1} (median-deviation)         default false
///   center      "sample-mean" | "none" | number           default sample-mean
///   side        "upper" | "lower" | "absolute"           default upper
///   t_grid      "a:b:step"                               required
///   replicas, seed, ci_level
///   bound       {"name", "params"}                       optional
inline ExperimentConfig parse_experiment_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  try {
    detail::reject_unknown(j,
                           {"ensemble", "statistic", "mode", "eigen_index", "lower_end", "center", "side", "t_grid",
                            "replicas", "seed", "ci_level", "bound"},
                           "config");
    c.ensemble = detail::require(j, "ensemble", "config");
    if (auto it = j.find("mode"); it != j.end()) {
      const auto m = it->get<std::string>();
      if (m == "tail") c.mode = ExperimentMode::tail;
      else if (m == "median-deviation") c.mode = ExperimentMode::median_deviation;
      else throw ConfigError("mode must be tail or median-deviation");
    }
    if (auto it = j.find("statistic"); it != j.end()) c.statistic = it->get<std::string>();
    else if (c.mode == ExperimentMode::tail) throw ConfigError("config: missing \"statistic\"");
    if (auto it = j.find("eigen_index"); it != j.end()) c.eigen_index = detail::as_count(*it, "eigen_index");
    if (auto it = j.find("lower_end"); it != j.end()) c.lower_end = it->get<bool>();
    if (auto it = j.find("center"); it != j.end()) {
      if (it->is_number()) c.centering = Centering::fixed(it->get<double>());
      else if (*it == "sample-mean") c.centering = Centering::sample_mean();
      else if (*it == "none") c.centering = Centering::none();
      else throw ConfigError("center must be \"sample-mean\", \"none\", or a number");
    }
    if (auto it = j.find("side"); it != j.end()) c.side = detail::parse_side(it->get<std::string>());
    c.t_grid_text = detail::require(j, "t_grid", "config").get<std::string>();
    if (auto it = j.find("replicas"); it != j.end()) c.replicas = detail::as_count(*it, "replicas");
    if (auto it = j.find("seed"); it != j.end()) c.seed = detail::as_count(*it, "seed");
    if (auto it = j.find("ci_level"); it != j.end()) c.ci_level = it->get<double>();
    if (auto it = j.find("bound"); it != j.end() && !it->is_null()) {
      detail::reject_unknown(*it, {"name", "params"}, "bound");
      BoundSelection b;
      b.name = detail::require(*it, "name", "bound").get<std::string>();
      if (auto p = it->find("params"); p != it->end()) b.params = *p;
      if (!b.params.is_object()) throw ConfigError("bound params must be an object");
      c.bound = std::move(b);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return c;
}

/// Checks everything that does not need the ensemble.
inline void validate_config(ExperimentConfig& c) {
  try {
    c.t_grid = parse_t_grid(c.t_grid_text);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (c.replicas < 100) throw ConfigError("replicas must be at least 100");
  if (!(c.ci_level > 0.0 && c.ci_level < 1.0)) throw ConfigError("ci_level must lie in (0,1)");
  if (c.mode == ExperimentMode::median_deviation && c.eigen_index < 1) throw ConfigError("eigen_index must be >= 1");
}

/// Replaces "declared"/"computed" placeholders with values from the ensemble:
///   chi           computed: exact fractional chromatic number of the dependency graph;
///                 declared: max degree + 1 of that graph
///   k, l          hd_params of the declared hypergraph structure (either keyword)
///   n             dimension of the ensemble
///   range_sq_sum  Σ (b_i - a_i)^2 over the declared variable ranges
///   var_sum       Σ Var X_i from the ensemble's analytic moments
///   b             max_i sup (X_i - E X_i)
///   s             the experiment's eigen_index
inline BoundParams resolve_bound_params(const BoundSelection& sel, const Ensemble& ens, const ExperimentConfig& cfg) {
  BoundParams out;
  std::optional<HdParams> hdp;
  auto need_hd = [&]() -> const HdParams& {
    if (!hdp) {
      auto hd = ens.declared_hd();
      if (!hd) throw ConfigError(ens.name() + " declares no hypergraph structure; give k and l explicitly");
      hdp = hd_params(*hd);
    }
    return *hdp;
  };
  for (auto it = sel.params.begin(); it != sel.params.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    if (v.is_number_integer() || v.is_number_unsigned()) {
      out[key] = v.dump();
      continue;
    }
    if (v.is_number_float()) {
      out[key] = format_number(v.get<double>());
      continue;
    }
    if (!v.is_string()) throw ConfigError("bound parameter '" + key + "' must be a number or string");
    const std::string s = v.get<std::string>();
    if (s != "declared" && s != "computed") {
      out[key] = s;
      continue;
    }
    const bool computed = s == "computed";
    if (key == "chi") {
      const auto g = ens.dependency_graph();
      out[key] = computed ? format_rational(fractional_chromatic(g).value) : std::to_string(g.max_degree() + 1);
    } else if (key == "k") {
      out[key] = std::to_string(need_hd().k);
    } else if (key == "l") {
      out[key] = std::to_string(need_hd().l);
    } else if (key == "n") {
      out[key] = std::to_string(ens.dimension());
    } else if (key == "range_sq_sum") {
      double acc = 0.0;
      for (auto [lo, hi] : ens.variable_ranges()) acc += (hi - lo) * (hi - lo);
      out[key] = format_number(acc);
    } else if (key == "var_sum" || key == "b") {
      const auto mo = ens.moments();
      if (!mo) throw ConfigError(ens.name() + " has no analytic moments; give " + key + " explicitly");
      out[key] = format_number(key == "b" ? mo->upper_deviation : mo->variance * static_cast<double>(ens.dimension()));
    } else if (key == "s") {
      out[key] = std::to_string(cfg.eigen_index);
    } else {
      throw ConfigError("bound parameter '" + key + "' cannot be " + s);
    }
  }
  return out;
}

struct ExperimentResult {
  SimulationReport report;
  std::optional<BoundCurve> curve;
  std::optional<Comparison> comparison;
  /// True iff every compared row passes (or no bound was requested).
  bool pass() const { return !comparison || comparison->pass; }
  std::string csv;
  std::string json_text;
};

/// Runs the experiment; `threads` only affects speed.
inline ExperimentResult run_experiment(ExperimentConfig cfg, unsigned threads = 1) {
  validate_config(cfg);
  std::unique_ptr<Ensemble> ens;
  try {
    ens = make_ensemble(cfg.ensemble);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  // Resolve everything that can fail before sampling.
  Statistic stat;
  std::string stat_name = cfg.statistic;
  if (cfg.mode == ExperimentMode::median_deviation) {
    if (!ens->matrix_order()) throw ConfigError(ens->name() + " does not produce symmetric matrices");
    if (cfg.eigen_index > *ens->matrix_order()) throw ConfigError("eigen_index exceeds the matrix order");
    stat_name = (cfg.lower_end ? "lambda-low:" : "lambda:") + std::to_string(cfg.eigen_index);
  }
  try {
    stat = ens->statistic(stat_name);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  ExperimentResult res;
  if (cfg.bound) {
    try {
      res.curve = evaluate_named_bound(cfg.bound->name, resolve_bound_params(*cfg.bound, *ens, cfg), cfg.t_grid);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }

  const auto values = simulate(*ens, stat, cfg.replicas, cfg.seed, threads);
  TailOptions opt{cfg.centering, cfg.side, cfg.ci_level, threads};
  if (cfg.mode == ExperimentMode::median_deviation) {
    opt.centering = Centering::median();
    opt.side = TailSide::absolute;
  }
  res.report = tail_report(values, cfg.t_grid, opt);
  res.report.ensemble = ens->name();
  res.report.statistic = stat_name;
  res.report.seed = cfg.seed;
  if (res.curve) res.comparison = compare_bound(res.report, *res.curve);

  res.csv = report_to_csv(res.report, res.comparison ? &*res.comparison : nullptr);
  auto j = report_to_json(res.report, res.curve ? &*res.curve : nullptr, res.comparison ? &*res.comparison : nullptr);
  j["t_grid"] = cfg.t_grid_text;
  j["ensemble_spec"] = cfg.ensemble;
  res.json_text = j.dump(2) + "\n";
  return res;
}

/// Writes report.csv and report.json into out_dir (created if needed).
inline void write_experiment(const ExperimentResult& res, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());
  for (auto [name, text] : {std::pair{"report.csv", &res.csv}, std::pair{"report.json", &res.json_text}}) {
    std::ofstream f(out_dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (out_dir / name).string());
    f << *text;
    if (!f) throw std::runtime_error("write failed for " + (out_dir / name).string());
  }
}

}  // namespace ldconc
