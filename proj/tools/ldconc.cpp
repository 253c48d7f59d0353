// ldconc: cover computations, bound curves, self-bounding certificates and
// Monte Carlo verification from the command line.
//
// Exit status: 0 success / PASS, 1 FAIL verdict, 2 usage or config error.
// Errors are printed to stderr as {"error": "..."}.

#include "ldconc/ldconc.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

using ldconc::json;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ldconc::ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ldconc::ConfigError(path + ": " + e.what());
  }
}

int report_error(const std::string& what, int code = kUsage) {
  std::cerr << json{{"error", what}}.dump() << "\n";
  return code;
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// ---------------------------------------------------------------------------

struct CoversArgs {
  std::string input;
  bool hd = false;
  bool exactify = false;
  std::size_t cap = ldconc::kDefaultEnumerationCap;
  std::string format = "json";
};

int run_covers(const CoversArgs& a) {
  const json in = read_json_file(a.input);
  json out;
  ldconc::DependencyGraph g;
  try {
    if (a.hd) {
      const auto hd = ldconc::hd_from_json(in);
      const auto p = ldconc::hd_params(hd);
      g = ldconc::derived_graph(hd);
      out["hd"] = {{"k", p.k}, {"l", p.l}, {"max_degree", p.max_degree}, {"m", p.m()}};
    } else {
      g = ldconc::graph_from_json(in);
    }
  } catch (const std::exception& e) {
    throw ldconc::ConfigError(e.what());
  }
  out["n"] = g.size();
  out["edges"] = g.edge_count();
  out["max_degree"] = g.max_degree();
  if (g.size() <= a.cap) {
    const auto c = ldconc::chromatic_number(g, a.cap);
    out["chi"] = c.chromatic_number;
    out["coloring"] = c.cover;
  } else {
    out["chi"] = nullptr;
    out["coloring"] = nullptr;
  }
  const auto f = ldconc::fractional_chromatic(g);
  out["chi_star"] = ldconc::rational_to_json(f.value);
  auto cover = f.cover;
  if (a.exactify) cover = ldconc::exactify(cover);
  out["cover"] = ldconc::cover_to_json(cover);
  json dual = json::array();
  for (const auto& w : f.vertex_weights) dual.push_back(ldconc::format_rational(w));
  out["vertex_weights"] = dual;

  if (a.format == "csv") {
    std::cout << "n,edges,max_degree,chi,chi_star,chi_star_decimal\n"
              << g.size() << ',' << g.edge_count() << ',' << g.max_degree() << ','
              << (out["chi"].is_null() ? std::string() : out["chi"].dump()) << ','
              << ldconc::format_rational(f.value) << ',' << ldconc::format_number(ldconc::to_double(f.value)) << "\n";
  } else {
    std::cout << out.dump(2) << "\n";
  }
  return kPass;
}

// ---------------------------------------------------------------------------

struct BoundArgs {
  std::string name;
  std::string params;
  std::string t_grid;
  std::string format = "csv";
};

int run_bound(const BoundArgs& a) {
  ldconc::BoundCurve c;
  try {
    c = ldconc::evaluate_named_bound(a.name, ldconc::parse_bound_params(a.params), ldconc::parse_t_grid(a.t_grid));
  } catch (const std::exception& e) {
    throw ldconc::ConfigError(e.what());
  }
  if (a.format == "json") std::cout << ldconc::curve_to_json(c).dump(2) << "\n";
  else std::cout << ldconc::curve_to_csv(c);
  return kPass;
}

// ---------------------------------------------------------------------------

struct CertifyArgs {
  std::string input;
  std::string variant;
  std::string a = "0";
  std::string b = "0";
  std::string alpha;
  bool exact = false;
  double tolerance = 1e-12;
};

template <class T>
int certify_as(const CertifyArgs& args, const json& in, T a, T b, T tol) {
  ldconc::TabulatedFunction<T> f;
  std::optional<ldconc::AlphaTable<T>> alpha;
  ldconc::SelfBoundingVariant v;
  try {
    v = ldconc::parse_variant(args.variant);
    f = ldconc::table_from_json<T>(in);
    if (ldconc::uses_alpha(v)) {
      if (args.alpha.empty()) throw std::invalid_argument("variant " + args.variant + " needs --alpha");
      alpha = ldconc::alpha_from_json<T>(read_json_file(args.alpha), f.domain());
    } else if (!args.alpha.empty()) {
      throw std::invalid_argument("--alpha is only used by alpha variants");
    }
  } catch (const ldconc::ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ldconc::ConfigError(e.what());
  }
  const auto rep = ldconc::certify(f, v, a, b, alpha ? &*alpha : nullptr, tol);
  std::cout << ldconc::certificate_to_json(rep).dump(2) << "\n";
  return rep.holds ? kPass : kFail;
}

int run_certify(const CertifyArgs& args) {
  const json in = read_json_file(args.input);
  ldconc::Rational a, b;
  try {
    a = ldconc::parse_rational(args.a);
    b = ldconc::parse_rational(args.b);
  } catch (const std::exception& e) {
    throw ldconc::ConfigError(std::string("--a/--b: ") + e.what());
  }
  if (args.exact) return certify_as<ldconc::Rational>(args, in, a, b, ldconc::Rational(0));
  return certify_as<double>(args, in, ldconc::to_double(a), ldconc::to_double(b), args.tolerance);
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicas;
  std::optional<double> ci_level;
  std::optional<std::string> t_grid;
  std::string out;
  unsigned threads = default_threads();
  std::string format = "csv";
};

int run_verify(const VerifyArgs& a) {
  auto cfg = ldconc::parse_experiment_config(read_json_file(a.config));
  if (a.seed) cfg.seed = *a.seed;
  if (a.replicas) cfg.replicas = *a.replicas;
  if (a.ci_level) cfg.ci_level = *a.ci_level;
  if (a.t_grid) cfg.t_grid_text = *a.t_grid;
  const auto res = ldconc::run_experiment(cfg, a.threads);
  if (!a.out.empty()) ldconc::write_experiment(res, a.out);
  std::cout << (a.format == "json" ? res.json_text : res.csv);
  return res.pass() ? kPass : kFail;
}

// ---------------------------------------------------------------------------

struct ExampleArgs {
  std::string spec;
  std::uint64_t seed = 1;
  std::uint64_t replica = 0;
};

int run_example(const ExampleArgs& a) {
  std::unique_ptr<ldconc::Ensemble> e;
  try {
    e = ldconc::make_ensemble(read_json_file(a.spec));
  } catch (const ldconc::ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ldconc::ConfigError(ex.what());
  }
  auto out = ldconc::realization_to_json(*e, a.seed, a.replica);
  if (auto hd = e->declared_hd()) {
    const auto p = ldconc::hd_params(*hd);
    out["declared_hd"] = {{"k", p.k}, {"l", p.l}, {"max_degree", p.max_degree}};
  }
  if (auto ld = e->declared_ld1()) out["declared_ld1"] = ld->sets();
  std::cout << out.dump(2) << "\n";
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concentration bounds for locally dependent random variables"};
  app.require_subcommand(1);

  CoversArgs covers;
  auto* c = app.add_subcommand("covers", "chromatic and fractional chromatic numbers of a dependency graph");
  c->add_option("input", covers.input, "graph JSON {\"n\",\"edges\"} (or hypergraph JSON with --hd)")->required();
  c->add_flag("--hd", covers.hd, "input is {\"n\",\"N\",\"S\"}; use its derived graph");
  c->add_flag("--exactify", covers.exactify, "print an exact cover of the same total weight");
  c->add_option("--cap", covers.cap, "vertex cap for exact chromatic number")->capture_default_str();
  c->add_option("--format", covers.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  BoundArgs bound;
  auto* b = app.add_subcommand("bound", "evaluate a bound on a t-grid");
  b->add_option("name", bound.name, "bound name")->required();
  b->add_option("--params", bound.params, "k=v,k=v");
  b->add_option("--t-grid", bound.t_grid, "a:b:step")->required();
  b->add_option("--format", bound.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  CertifyArgs cert;
  auto* ce = app.add_subcommand("certify", "exhaustively check a self-bounding property of a table");
  ce->add_option("input", cert.input, "table JSON {\"sizes\",\"values\"}")->required();
  ce->add_option("--variant", cert.variant, "sb | weak-sb | alpha-sb | weak-alpha-sb")->required();
  ce->add_option("--a", cert.a, "parameter a (p/q or decimal)")->capture_default_str();
  ce->add_option("--b", cert.b, "parameter b (p/q or decimal)")->capture_default_str();
  ce->add_option("--alpha", cert.alpha, "alpha JSON {\"values\": [[...] per point]}");
  ce->add_flag("--exact", cert.exact, "use exact rational arithmetic");
  ce->add_option("--tolerance", cert.tolerance, "slack for floating-point checks")->capture_default_str();

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "run an experiment config and compare against its bound");
  v->add_option("config", ver.config, "experiment JSON")->required();
  v->add_option("--seed", ver.seed);
  v->add_option("--replicas", ver.replicas);
  v->add_option("--ci-level", ver.ci_level);
  v->add_option("--t-grid", ver.t_grid, "a:b:step");
  v->add_option("--out", ver.out, "directory for report.csv and report.json");
  v->add_option("--threads", ver.threads, "worker cap (results do not depend on it)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  v->add_option("--format", ver.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  ExampleArgs ex;
  auto* e = app.add_subcommand("example", "dump one realization of an ensemble");
  e->add_option("spec", ex.spec, "ensemble JSON {\"name\",\"params\"}")->required();
  e->add_option("--seed", ex.seed)->capture_default_str();
  e->add_option("--replica", ex.replica)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& h) {
    return app.exit(h);
  } catch (const CLI::CallForAllHelp& h) {
    return app.exit(h);
  } catch (const CLI::ParseError& err) {
    return report_error(err.what());
  }

  try {
    if (*c) return run_covers(covers);
    if (*b) return run_bound(bound);
    if (*ce) return run_certify(cert);
    if (*v) return run_verify(ver);
    if (*e) return run_example(ex);
  } catch (const ldconc::ConfigError& err) {
    return report_error(err.what());
  } catch (const std::exception& err) {
    return report_error(err.what(), kUsage);
  }
  return kUsage;
}
