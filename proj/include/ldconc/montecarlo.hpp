// Monte Carlo estimates of tails, MGFs, and median deviations, and their
// comparison against bound curves.
//
// Replica r always draws from substream (seed, r) and results are reduced in
// replica order, so reports do not depend on the number of worker threads.
#pragma once

#include "ldconc/bounds.hpp"
#include "ldconc/ensembles.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace ldconc {

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Exact (Clopper-Pearson) two-sided interval for a binomial proportion.
inline Interval clopper_pearson(std::size_t successes, std::size_t trials, double level) {
  if (trials == 0) throw std::invalid_argument("no trials");
  if (successes > trials) throw std::invalid_argument("successes exceed trials");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must lie in (0,1)");
  const double alpha = 1.0 - level;
  const double x = static_cast<double>(successes), n = static_cast<double>(trials);
  Interval ci;
  ci.low = successes == 0 ? 0.0 : boost::math::quantile(boost::math::beta_distribution<>(x, n - x + 1.0), alpha / 2.0);
  ci.high = successes == trials ? 1.0
                                : boost::math::quantile(boost::math::beta_distribution<>(x + 1.0, n - x), 1.0 - alpha / 2.0);
  return ci;
}

/// Evaluates `fn(rng, replica)` for every replica in [0, replicas) on up to
/// `threads` workers. Output is indexed by replica.
template <class Fn>
std::vector<double> run_replicas(std::size_t replicas, std::uint64_t seed, unsigned threads, Fn&& fn) {
  std::vector<double> out(replicas);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(replicas, 1))));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      Rng rng(seed, r);
      out[r] = fn(rng, r);
    }
  };
  if (threads == 1) {
    work(0, replicas);
    return out;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::size_t chunk = (replicas + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t begin = w * chunk, end = std::min(replicas, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        work(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// Statistic values for replicas 0..replicas-1.
inline std::vector<double> simulate(const Ensemble& ens, const Statistic& stat, std::size_t replicas,
                                    std::uint64_t seed, unsigned threads = 1) {
  return run_replicas(replicas, seed, threads, [&](Rng& rng, std::size_t) {
    std::vector<double> x;
    ens.sample(rng, x);
    return stat(x);
  });
}

/// Which event is counted at each t.
enum class TailSide { upper, lower, absolute };

/// Center subtracted from the statistic before thresholding.
struct Centering {
  enum class Kind { sample_mean, none, fixed, median } kind = Kind::sample_mean;
  double value = 0.0;

  static Centering sample_mean() { return {}; }
  static Centering none() { return {Kind::none, 0.0}; }
  static Centering fixed(double v) { return {Kind::fixed, v}; }
  static Centering median() { return {Kind::median, 0.0}; }

  std::string label() const {
    switch (kind) {
      case Kind::sample_mean: return "sample-mean";
      case Kind::none: return "none";
      case Kind::fixed: return "fixed";
      case Kind::median: return "median";
    }
    return "?";
  }
};

struct TailRow {
  double t = 0.0;
  std::size_t count = 0;
  double p_hat = 0.0;
  Interval ci;
};

struct SimulationReport {
  std::string ensemble;
  std::string statistic;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  double ci_level = 0.99;
  Centering centering;
  /// The center actually used (sample mean, median, fixed value, or 0).
  double center = 0.0;
  TailSide side = TailSide::upper;
  std::vector<TailRow> rows;
};

struct TailOptions {
  Centering centering = Centering::sample_mean();
  TailSide side = TailSide::upper;
  double ci_level = 0.99;
  unsigned threads = 1;
};

namespace detail {

/// Lower median of a sample.
inline double lower_median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of an empty sample");
  const std::size_t k = (v.size() - 1) / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  return v[k];
}

inline bool hits(double dev, double t, TailSide side) {
  switch (side) {
    case TailSide::upper: return dev >= t;
    case TailSide::lower: return dev <= -t;
    case TailSide::absolute: return std::abs(dev) > t;
  }
  return false;
}

}  // namespace detail

/// Tail report from precomputed statistic values.
inline SimulationReport tail_report(const std::vector<double>& values, const std::vector<double>& t_grid,
                                    const TailOptions& opt) {
  if (values.empty()) throw std::invalid_argument("no replicas");
  SimulationReport rep;
  rep.replicas = values.size();
  rep.ci_level = opt.ci_level;
  rep.centering = opt.centering;
  rep.side = opt.side;
  switch (opt.centering.kind) {
    case Centering::Kind::sample_mean: {
      double s = 0.0;
      for (double v : values) s += v;
      rep.center = s / static_cast<double>(values.size());
      break;
    }
    case Centering::Kind::none: rep.center = 0.0; break;
    case Centering::Kind::fixed: rep.center = opt.centering.value; break;
    case Centering::Kind::median: rep.center = detail::lower_median(values); break;
  }
  for (double t : t_grid) {
    if (!(t >= 0.0)) throw std::invalid_argument("t-grid values must be nonnegative");
    TailRow row;
    row.t = t;
    for (double v : values) row.count += detail::hits(v - rep.center, t, opt.side);
    row.p_hat = static_cast<double>(row.count) / static_cast<double>(values.size());
    row.ci = clopper_pearson(row.count, values.size(), opt.ci_level);
    rep.rows.push_back(row);
  }
  return rep;
}

/// Empirical P(stat - center >= t) (or the selected side) with exact binomial CIs.
inline SimulationReport estimate_tail(const Ensemble& ens, const std::string& statistic_name,
                                      const std::vector<double>& t_grid, std::size_t replicas, std::uint64_t seed,
                                      const TailOptions& opt = {}) {
  if (replicas < 100) throw std::invalid_argument("estimate_tail needs at least 100 replicas");
  const Statistic stat = ens.statistic(statistic_name);
  auto rep = tail_report(simulate(ens, stat, replicas, seed, opt.threads), t_grid, opt);
  rep.ensemble = ens.name();
  rep.statistic = statistic_name;
  rep.seed = seed;
  return rep;
}

/// Empirical P(|λ_s - median(λ_s)| > t); with `lower_end`, uses λ_{n-s+1}.
inline SimulationReport estimate_median_deviation(const Ensemble& ens, std::size_t s, const std::vector<double>& t_grid,
                                                  std::size_t replicas, std::uint64_t seed, double ci_level = 0.99,
                                                  unsigned threads = 1, bool lower_end = false) {
  const auto order = ens.matrix_order();
  if (!order) throw std::invalid_argument(ens.name() + " does not produce symmetric matrices");
  if (s < 1 || s > *order) throw std::invalid_argument("eigenvalue index out of range");
  if (replicas < 100) throw std::invalid_argument("estimate_median_deviation needs at least 100 replicas");
  const std::string name = (lower_end ? "lambda-low:" : "lambda:") + std::to_string(s);
  TailOptions opt{Centering::median(), TailSide::absolute, ci_level, threads};
  auto rep = tail_report(simulate(ens, ens.statistic(name), replicas, seed, threads), t_grid, opt);
  rep.ensemble = ens.name();
  rep.statistic = name;
  rep.seed = seed;
  return rep;
}

struct MgfEstimate {
  double theta = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  Interval ci;
};

/// Sample mean of exp(θ stat) from precomputed values, normal-approximation CI.
inline MgfEstimate mgf_from_values(const std::vector<double>& values, double theta, double ci_level = 0.99) {
  if (values.size() < 2) throw std::invalid_argument("need at least two replicas");
  MgfEstimate est;
  est.theta = theta;
  std::vector<double> e;
  e.reserve(values.size());
  for (double v : values) {
    if (std::abs(theta * v) > 700.0) throw std::overflow_error("theta * statistic exceeds the exp overflow guard");
    e.push_back(std::exp(theta * v));
  }
  double s = 0.0;
  for (double v : e) s += v;
  const double n = static_cast<double>(e.size());
  est.mean = s / n;
  double ss = 0.0;
  for (double v : e) ss += (v - est.mean) * (v - est.mean);
  est.std_error = std::sqrt(ss / (n - 1.0) / n);
  const double z = boost::math::quantile(boost::math::normal_distribution<>(), 0.5 + ci_level / 2.0);
  est.ci = {est.mean - z * est.std_error, est.mean + z * est.std_error};
  return est;
}

inline MgfEstimate estimate_mgf(const Ensemble& ens, const Statistic& stat, double theta, std::size_t replicas,
                                std::uint64_t seed, double ci_level = 0.99, unsigned threads = 1) {
  return mgf_from_values(simulate(ens, stat, replicas, seed, threads), theta, ci_level);
}

struct ComparisonRow {
  double t = 0.0;
  double p_hat = 0.0;
  Interval ci;
  double bound_raw = 0.0;
  double bound_capped = 0.0;
  bool pass = true;
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  bool pass = true;
};

/// PASS at t iff the lower confidence limit of p_hat(t) does not exceed the
/// capped bound; a bound is only refuted when the data force it.
inline Comparison compare_bound(const SimulationReport& report, const BoundCurve& curve) {
  if (report.rows.size() != curve.grid.size()) throw std::invalid_argument("t-grids differ in length");
  Comparison cmp;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    const auto& b = curve.grid[i];
    if (std::abs(r.t - b.t) > 1e-12 * std::max(1.0, std::abs(r.t)))
      throw std::invalid_argument("t-grids differ at index " + std::to_string(i));
    ComparisonRow row{r.t, r.p_hat, r.ci, b.value.raw, b.value.capped(), r.ci.low <= b.value.capped()};
    cmp.pass = cmp.pass && row.pass;
    cmp.rows.push_back(row);
  }
  return cmp;
}

}  // namespace ldconc
