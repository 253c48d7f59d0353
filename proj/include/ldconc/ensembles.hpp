// Seedable generators for locally dependent constructions, each carrying the
// dependence structure it declares so the structure can be cross-checked.
#pragma once

#include "ldconc/depstruct.hpp"
#include "ldconc/random.hpp"
#include "ldconc/spectrum.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ldconc {

/// A real-valued function of one realization. Must be pure (called concurrently).
using Statistic = std::function<double(std::span<const double>)>;

/// Per-variable moments, when the ensemble knows them analytically.
struct VariableMoments {
  double mean = 0.0;
  double variance = 0.0;
  double upper_deviation = 0.0;  // sup (X_i - E X_i)
};

/// Common interface: a realization is the vector of observed variables X.
class Ensemble {
 public:
  virtual ~Ensemble() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual void sample(Rng& rng, std::vector<double>& x) const = 0;

  std::vector<double> realization(std::uint64_t seed, std::uint64_t replica = 0) const {
    Rng rng(seed, replica);
    std::vector<double> x;
    sample(rng, x);
    return x;
  }

  virtual std::vector<std::string> statistic_names() const = 0;

  /// Throws std::invalid_argument for names the ensemble does not define.
  virtual Statistic statistic(std::string_view name) const = 0;

  virtual std::optional<Ld1Neighborhoods> declared_ld1() const { return std::nullopt; }
  virtual std::optional<HyperDependence> declared_hd() const { return std::nullopt; }

  /// A dependency graph on X (default: from the declared LD1 or HD structure).
  virtual DependencyGraph dependency_graph() const {
    if (auto a = declared_ld1()) return ld1_graph(*a);
    if (auto h = declared_hd()) return derived_graph(*h);
    throw std::logic_error(name() + " declares no dependence structure");
  }

  /// (a_i, b_i) with a_i <= X_i <= b_i.
  virtual std::vector<std::pair<double, double>> variable_ranges() const = 0;

  virtual std::optional<VariableMoments> moments() const { return std::nullopt; }

  /// Order of the symmetric matrix encoded by X (upper triangle, row-major).
  virtual std::optional<std::size_t> matrix_order() const { return std::nullopt; }

 protected:
  [[noreturn]] void unknown_statistic(std::string_view stat) const {
    throw std::invalid_argument("statistic '" + std::string(stat) + "' is not defined for ensemble " + name());
  }
};

namespace detail {

inline Statistic sum_statistic() {
  return [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  };
}

inline std::optional<std::size_t> parse_index_suffix(std::string_view name, std::string_view prefix) {
  if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
  auto rest = name.substr(prefix.size());
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
  if (ec != std::errc() || p != rest.data() + rest.size()) return std::nullopt;
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Paired signs with a hidden global sign: locally dependent in the LD1 sense
// but with no concentration for Hamming-Lipschitz functions.

struct CounterexampleRealization {
  std::vector<int> x;
  std::vector<int> x_prime;
  int q = 1;
  /// Σ X_i X_i', always n q / 2.
  double f = 0.0;
};

class CounterexampleEnsemble final : public Ensemble {
 public:
  explicit CounterexampleEnsemble(std::size_t n) : n_(n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("counterexample needs an even n >= 2");
  }

  std::string name() const override { return "counterexample"; }
  std::size_t dimension() const override { return n_; }

  CounterexampleRealization draw(Rng& rng) const {
    const std::size_t h = n_ / 2;
    CounterexampleRealization r;
    r.x.resize(h);
    for (auto& v : r.x) v = rng.sign();
    r.q = rng.sign();
    r.x_prime.resize(h);
    long acc = 0;
    for (std::size_t i = 0; i < h; ++i) {
      r.x_prime[i] = r.q * r.x[i];
      acc += r.x[i] * r.x_prime[i];
    }
    r.f = static_cast<double>(acc);
    return r;
  }

  /// Layout: X_0..X_{n/2-1}, then X'_0..X'_{n/2-1}.
  void sample(Rng& rng, std::vector<double>& x) const override {
    auto r = draw(rng);
    x.assign(r.x.begin(), r.x.end());
    x.insert(x.end(), r.x_prime.begin(), r.x_prime.end());
  }

  std::vector<std::string> statistic_names() const override { return {"f", "sum"}; }

  Statistic statistic(std::string_view stat) const override {
    if (stat == "sum") return detail::sum_statistic();
    if (stat == "f") {
      const std::size_t h = n_ / 2;
      return [h](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t i = 0; i < h; ++i) s += x[i] * x[i + h];
        return s;
      };
    }
    unknown_statistic(stat);
  }

  /// A_i = {i, partner(i)}: a perfect matching, (LD1, 2).
  std::optional<Ld1Neighborhoods> declared_ld1() const override {
    const std::size_t h = n_ / 2;
    std::vector<IndexSet> a(n_);
    for (std::size_t i = 0; i < h; ++i) {
      a[i] = {i, i + h};
      a[i + h] = {i, i + h};
    }
    return Ld1Neighborhoods(std::move(a));
  }

  /// Naive source encoding through the global sign: sources X_0..X_{h-1}, Q.
  /// Q feeds every X'_i, so l = n / 2.
  HyperDependence naive_hd() const {
    const std::size_t h = n_ / 2;
    std::vector<IndexSet> s(n_);
    for (std::size_t i = 0; i < h; ++i) {
      s[i] = {i};
      s[i + h] = {i, h};
    }
    return HyperDependence(h + 1, std::move(s));
  }

  std::vector<std::pair<double, double>> variable_ranges() const override {
    return std::vector<std::pair<double, double>>(n_, {-1.0, 1.0});
  }

  std::optional<VariableMoments> moments() const override { return VariableMoments{0.0, 1.0, 1.0}; }

 private:
  std::size_t n_;
};

inline CounterexampleRealization gen_counterexample(std::size_t n, std::uint64_t seed, std::uint64_t replica = 0) {
  CounterexampleEnsemble e(n);
  Rng rng(seed, replica);
  return e.draw(rng);
}

// ---------------------------------------------------------------------------
// Cyclic m-dependent sequences X_i = f(Y_i, ..., Y_{i+m-1 mod n}).

enum class WindowFamily { sum, xor_sign, max };
enum class SourceLaw { sign, uniform };

inline WindowFamily parse_window_family(std::string_view s) {
  if (s == "window-sum") return WindowFamily::sum;
  if (s == "window-xor") return WindowFamily::xor_sign;
  if (s == "window-max") return WindowFamily::max;
  throw std::invalid_argument("unknown window family '" + std::string(s) + "'");
}

inline std::string_view window_family_name(WindowFamily f) {
  switch (f) {
    case WindowFamily::sum: return "window-sum";
    case WindowFamily::xor_sign: return "window-xor";
    case WindowFamily::max: return "window-max";
  }
  return "?";
}

inline SourceLaw parse_source_law(std::string_view s) {
  if (s == "sign") return SourceLaw::sign;
  if (s == "uniform") return SourceLaw::uniform;
  throw std::invalid_argument("unknown source law '" + std::string(s) + "'");
}

struct MDependentRealization {
  std::vector<double> y;
  std::vector<double> x;
};

class MDependentEnsemble final : public Ensemble {
 public:
  MDependentEnsemble(std::size_t n, std::size_t m, WindowFamily family, SourceLaw law)
      : n_(n), m_(m), family_(family), law_(law) {
    if (m < 1 || n < m) throw std::invalid_argument("m-dependent ensemble needs n >= m >= 1");
  }

  std::string name() const override { return "m-dependent"; }
  std::size_t dimension() const override { return n_; }
  std::size_t window() const { return m_; }
  WindowFamily family() const { return family_; }
  SourceLaw law() const { return law_; }

  MDependentRealization draw(Rng& rng) const {
    MDependentRealization r;
    r.y.resize(n_);
    for (auto& v : r.y) v = law_ == SourceLaw::sign ? static_cast<double>(rng.sign()) : rng.uniform();
    r.x.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      double acc = family_ == WindowFamily::sum ? 0.0 : (family_ == WindowFamily::xor_sign ? 1.0 : -std::numeric_limits<double>::infinity());
      for (std::size_t w = 0; w < m_; ++w) {
        const double yv = r.y[(i + w) % n_];
        switch (family_) {
          case WindowFamily::sum: acc += yv; break;
          case WindowFamily::xor_sign: acc *= law_ == SourceLaw::sign ? yv : (yv >= 0.5 ? 1.0 : -1.0); break;
          case WindowFamily::max: acc = std::max(acc, yv); break;
        }
      }
      r.x[i] = acc;
    }
    return r;
  }

  void sample(Rng& rng, std::vector<double>& x) const override { x = draw(rng).x; }

  std::vector<std::string> statistic_names() const override { return {"sum"}; }

  Statistic statistic(std::string_view stat) const override {
    if (stat == "sum") return detail::sum_statistic();
    unknown_statistic(stat);
  }

  /// Sources grouped into consecutive blocks of size m (the remainder joins
  /// the last block). Each window meets at most 2 blocks and each block of
  /// size m is met by 2m - 1 windows.
  std::optional<HyperDependence> declared_hd() const override {
    const std::size_t blocks = n_ / m_;
    std::vector<IndexSet> s(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t w = 0; w < m_; ++w) s[i].push_back(std::min((i + w) % n_ / m_, blocks - 1));
    return HyperDependence(blocks, std::move(s));
  }

  /// One source per position: S_i = the window itself.
  HyperDependence window_hd() const {
    std::vector<IndexSet> s(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t w = 0; w < m_; ++w) s[i].push_back((i + w) % n_);
    return HyperDependence(n_, std::move(s));
  }

  /// Windows that share a position are adjacent.
  DependencyGraph dependency_graph() const override { return derived_graph(window_hd()); }

  std::vector<std::pair<double, double>> variable_ranges() const override {
    const double dm = static_cast<double>(m_);
    std::pair<double, double> r;
    switch (family_) {
      case WindowFamily::sum: r = law_ == SourceLaw::sign ? std::pair{-dm, dm} : std::pair{0.0, dm}; break;
      case WindowFamily::xor_sign: r = {-1.0, 1.0}; break;
      case WindowFamily::max: r = law_ == SourceLaw::sign ? std::pair{-1.0, 1.0} : std::pair{0.0, 1.0}; break;
    }
    return std::vector<std::pair<double, double>>(n_, r);
  }

  std::optional<VariableMoments> moments() const override {
    const double dm = static_cast<double>(m_);
    VariableMoments mo;
    switch (family_) {
      case WindowFamily::sum:
        if (law_ == SourceLaw::sign) mo = {0.0, dm, dm};
        else mo = {dm / 2.0, dm / 12.0, dm / 2.0};
        break;
      case WindowFamily::xor_sign:
        mo = {0.0, 1.0, 1.0};
        break;
      case WindowFamily::max:
        if (law_ == SourceLaw::sign) {
          const double mean = 1.0 - std::ldexp(2.0, -static_cast<int>(m_));
          mo = {mean, 1.0 - mean * mean, 1.0 - mean};
        } else {
          mo = {dm / (dm + 1.0), dm / ((dm + 1.0) * (dm + 1.0) * (dm + 2.0)), 1.0 / (dm + 1.0)};
        }
        break;
    }
    return mo;
  }

 private:
  std::size_t n_, m_;
  WindowFamily family_;
  SourceLaw law_;
};

inline MDependentRealization gen_m_dependent(std::size_t n, std::size_t m, WindowFamily family, SourceLaw law,
                                             std::uint64_t seed, std::uint64_t replica = 0) {
  MDependentEnsemble e(n, m, family, law);
  Rng rng(seed, replica);
  return e.draw(rng);
}

// ---------------------------------------------------------------------------
// Triangle indicators of G(n, p).

struct TriangleRealization {
  /// Edge indicators for pairs i < j in lexicographic order.
  std::vector<std::uint8_t> edges;
  /// Triangle indicators for triples i < j < k in lexicographic order.
  std::vector<std::uint8_t> triangles;
};

class ErTriangleEnsemble final : public Ensemble {
 public:
  ErTriangleEnsemble(std::size_t n, double p) : n_(n), p_(p) {
    if (n < 3) throw std::invalid_argument("triangle ensemble needs n >= 3");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must lie in [0,1]");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) triples_.push_back({edge_index(i, j), edge_index(i, k), edge_index(j, k)});
  }

  std::string name() const override { return "er-triangles"; }
  std::size_t dimension() const override { return triples_.size(); }
  std::size_t edge_count() const { return n_ * (n_ - 1) / 2; }

  std::size_t edge_index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return i * n_ - i * (i + 1) / 2 + (j - i - 1);
  }

  TriangleRealization draw(Rng& rng) const {
    TriangleRealization r;
    r.edges.resize(edge_count());
    for (auto& e : r.edges) e = rng.bernoulli(p_) ? 1 : 0;
    r.triangles.reserve(triples_.size());
    for (const auto& t : triples_) r.triangles.push_back(r.edges[t[0]] & r.edges[t[1]] & r.edges[t[2]]);
    return r;
  }

  void sample(Rng& rng, std::vector<double>& x) const override {
    auto r = draw(rng);
    x.assign(r.triangles.begin(), r.triangles.end());
  }

  std::vector<std::string> statistic_names() const override { return {"count"}; }

  Statistic statistic(std::string_view stat) const override {
    if (stat == "count" || stat == "sum") return detail::sum_statistic();
    unknown_statistic(stat);
  }

  std::optional<HyperDependence> declared_hd() const override {
    std::vector<IndexSet> s;
    s.reserve(triples_.size());
    for (const auto& t : triples_) s.push_back({t[0], t[1], t[2]});
    return HyperDependence(edge_count(), std::move(s));
  }

  std::vector<std::pair<double, double>> variable_ranges() const override {
    return std::vector<std::pair<double, double>>(dimension(), {0.0, 1.0});
  }

  std::optional<VariableMoments> moments() const override {
    const double q = p_ * p_ * p_;
    return VariableMoments{q, q * (1.0 - q), 1.0 - q};
  }

 private:
  std::size_t n_;
  double p_;
  std::vector<std::array<std::size_t, 3>> triples_;
};

inline TriangleRealization gen_er_triangles(std::size_t n, double p, std::uint64_t seed, std::uint64_t replica = 0) {
  ErTriangleEnsemble e(n, p);
  Rng rng(seed, replica);
  return e.draw(rng);
}

// ---------------------------------------------------------------------------
// Symmetric matrices whose upper triangle (row-major, i <= j) is X.

namespace detail {

inline std::size_t upper_count(std::size_t n) { return n * (n + 1) / 2; }

class MatrixEnsembleBase : public Ensemble {
 public:
  explicit MatrixEnsembleBase(std::size_t n) : n_(n) {
    if (n < 1 || n > kMaxSpectrumOrder) throw std::invalid_argument("matrix order out of range");
  }

  std::size_t dimension() const override { return upper_count(n_); }
  std::optional<std::size_t> matrix_order() const override { return n_; }

  std::vector<std::string> statistic_names() const override { return {"norm", "lambda:<s>", "lambda-low:<s>"}; }

  /// "norm": max |λ|; "lambda:s": s-th largest eigenvalue; "lambda-low:s": s-th smallest.
  Statistic statistic(std::string_view stat) const override {
    const std::size_t n = n_;
    if (stat == "norm")
      return [n](std::span<const double> x) {
        return symmetric_norm(symmetric_from_upper(n, std::vector<double>(x.begin(), x.end())));
      };
    for (bool low : {false, true}) {
      if (auto s = parse_index_suffix(stat, low ? "lambda-low:" : "lambda:")) {
        if (*s < 1 || *s > n) throw std::invalid_argument("eigenvalue index out of range");
        const std::size_t pos = low ? n - *s : *s - 1;
        return [n, pos](std::span<const double> x) {
          return symmetric_spectrum(symmetric_from_upper(n, std::vector<double>(x.begin(), x.end())))[pos];
        };
      }
    }
    unknown_statistic(stat);
  }

 protected:
  std::size_t n_;
};

}  // namespace detail

enum class EntryLaw { sign, uniform };

inline EntryLaw parse_entry_law(std::string_view s) {
  if (s == "sign") return EntryLaw::sign;
  if (s == "uniform") return EntryLaw::uniform;
  throw std::invalid_argument("unknown entry law '" + std::string(s) + "'");
}

/// Patterns:
///   "iid"            every upper entry is its own source (k = l = 1);
///   "row-block-sign" entry (i, j) = ε_{i, ⌊j/w⌋} · u_{ij}: one shared sign per
///                    row block of width w, so k = 2 and l = w.
class HdSymmetricEnsemble final : public detail::MatrixEnsembleBase {
 public:
  HdSymmetricEnsemble(std::size_t n, std::string pattern, std::size_t width, EntryLaw law)
      : MatrixEnsembleBase(n), pattern_(std::move(pattern)), width_(width), law_(law) {
    if (pattern_ != "iid" && pattern_ != "row-block-sign")
      throw std::invalid_argument("unknown matrix pattern '" + pattern_ + "'");
    if (pattern_ == "row-block-sign" && (width_ < 1 || width_ > n))
      throw std::invalid_argument("block width must be in [1, n]");
  }

  std::string name() const override { return "hd-symmetric"; }

  void sample(Rng& rng, std::vector<double>& x) const override {
    x.resize(dimension());
    std::vector<double> signs;
    if (pattern_ == "row-block-sign") {
      signs.resize(n_ * block_count());
      for (auto& s : signs) s = rng.sign();
    }
    for (auto& v : x) v = law_ == EntryLaw::sign ? static_cast<double>(rng.sign()) : 2.0 * rng.uniform() - 1.0;
    if (pattern_ == "row-block-sign") {
      std::size_t p = 0;
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i; j < n_; ++j, ++p) x[p] *= signs[i * block_count() + j / width_];
    }
  }

  RealMatrix gen_matrix(std::uint64_t seed, std::uint64_t replica = 0) const {
    return symmetric_from_upper(n_, realization(seed, replica));
  }

  std::optional<HyperDependence> declared_hd() const override {
    const std::size_t P = dimension();
    std::vector<IndexSet> s(P);
    for (std::size_t p = 0; p < P; ++p) s[p] = {p};
    std::size_t N = P;
    if (pattern_ == "row-block-sign") {
      std::size_t p = 0;
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i; j < n_; ++j, ++p) s[p].push_back(P + i * block_count() + j / width_);
      N += n_ * block_count();
    }
    return HyperDependence(N, std::move(s));
  }

  std::vector<std::pair<double, double>> variable_ranges() const override {
    return std::vector<std::pair<double, double>>(dimension(), {-1.0, 1.0});
  }

 private:
  std::size_t block_count() const { return (n_ + width_ - 1) / width_; }

  std::string pattern_;
  std::size_t width_;
  EntryLaw law_;
};

/// Patterns:
///   "iid"    independent ±K entries;
///   "paired" upper positions (2q, 2q+1) hold (K X_q, K Q X_q) with a global
///            sign Q, the paired-sign construction inside the upper triangle.
class Ld1HermitianEnsemble final : public detail::MatrixEnsembleBase {
 public:
  Ld1HermitianEnsemble(std::size_t n, std::string pattern, double K)
      : MatrixEnsembleBase(n), pattern_(std::move(pattern)), K_(K) {
    if (pattern_ != "iid" && pattern_ != "paired")
      throw std::invalid_argument("unknown matrix pattern '" + pattern_ + "'");
    if (!(K > 0.0)) throw std::invalid_argument("entry bound K must be positive");
  }

  std::string name() const override { return "ld1-hermitian"; }
  double entry_bound() const { return K_; }

  void sample(Rng& rng, std::vector<double>& x) const override {
    const std::size_t P = dimension();
    x.resize(P);
    for (auto& v : x) v = K_ * rng.sign();
    if (pattern_ == "paired") {
      const double q = rng.sign();
      for (std::size_t p = 0; p + 1 < P; p += 2) x[p + 1] = q * x[p];
    }
  }

  std::optional<Ld1Neighborhoods> declared_ld1() const override {
    const std::size_t P = dimension();
    std::vector<IndexSet> a(P);
    for (std::size_t p = 0; p < P; ++p) {
      a[p] = {p};
      if (pattern_ == "paired") {
        const std::size_t partner = p % 2 == 0 ? p + 1 : p - 1;
        if (partner < P) a[p].push_back(partner);
      }
    }
    return Ld1Neighborhoods(std::move(a));
  }

  std::vector<std::pair<double, double>> variable_ranges() const override {
    return std::vector<std::pair<double, double>>(dimension(), {-K_, K_});
  }

 private:
  std::string pattern_;
  double K_;
};

// ---------------------------------------------------------------------------
// Independent fair signs.

class IidSignEnsemble final : public Ensemble {
 public:
  explicit IidSignEnsemble(std::size_t n) : n_(n) {
    if (n < 1) throw std::invalid_argument("iid-sign needs n >= 1");
  }
  std::string name() const override { return "iid-sign"; }
  std::size_t dimension() const override { return n_; }
  void sample(Rng& rng, std::vector<double>& x) const override {
    x.resize(n_);
    for (auto& v : x) v = rng.sign();
  }
  std::vector<std::string> statistic_names() const override { return {"sum"}; }
  Statistic statistic(std::string_view stat) const override {
    if (stat == "sum") return detail::sum_statistic();
    unknown_statistic(stat);
  }
  std::optional<HyperDependence> declared_hd() const override {
    std::vector<IndexSet> s(n_);
    for (std::size_t i = 0; i < n_; ++i) s[i] = {i};
    return HyperDependence(n_, std::move(s));
  }
  std::vector<std::pair<double, double>> variable_ranges() const override {
    return std::vector<std::pair<double, double>>(n_, {-1.0, 1.0});
  }
  std::optional<VariableMoments> moments() const override { return VariableMoments{0.0, 1.0, 1.0}; }

 private:
  std::size_t n_;
};

}  // namespace ldconc
