// Proper covers, chromatic number, and fractional chromatic number of a
// dependency graph, plus exactification of fractional covers.
//
// All weights are exact rationals. The fractional chromatic number is the
// optimum of
//
//     minimize  sum_j w_j
//     s.t.      sum_{j : v in I_j} w_j >= 1   for every vertex v
//               w_j >= 0
//
// over independent sets I_j. Columns may be restricted to maximal independent
// sets without loss. The LP is solved by column generation: an exact rational
// simplex on the restricted master, with an exact maximum-weight independent
// set search pricing out new columns.
#pragma once

#include "ldconc/depstruct.hpp"
#include "ldconc/rational.hpp"

#include <algorithm>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ldconc {

inline constexpr std::size_t kDefaultEnumerationCap = 24;
inline constexpr std::size_t kMaxCoverVertices = 256;

using VertexSet = std::bitset<kMaxCoverVertices>;

struct CoverPart {
  IndexSet set;
  Rational weight;
  friend bool operator==(const CoverPart&, const CoverPart&) = default;
};

class FractionalCover {
 public:
  FractionalCover() = default;

  /// Parts must be nonempty subsets of [n] with weights in [0, 1].
  FractionalCover(std::size_t n, std::vector<CoverPart> parts) : n_(n), parts_(std::move(parts)) {
    for (auto& p : parts_) {
      p.set = detail::sorted_unique(std::move(p.set));
      if (p.set.empty()) throw std::invalid_argument("cover part is empty");
      if (p.set.back() >= n) throw std::invalid_argument("cover part index out of range");
      if (p.weight < 0 || p.weight > 1) throw std::invalid_argument("cover weight outside [0,1]");
    }
  }

  std::size_t size() const { return n_; }
  const std::vector<CoverPart>& parts() const { return parts_; }

  Rational total_weight() const {
    Rational t = 0;
    for (const auto& p : parts_) t += p.weight;
    return t;
  }

  /// Total weight of the parts containing each element.
  std::vector<Rational> coverage() const {
    std::vector<Rational> c(n_, Rational(0));
    for (const auto& p : parts_)
      for (auto v : p.set) c[v] += p.weight;
    return c;
  }

 private:
  std::size_t n_ = 0;
  std::vector<CoverPart> parts_;
};

namespace detail {

inline void check_cap(const DependencyGraph& g, std::size_t cap) {
  if (cap > kMaxCoverVertices) throw std::invalid_argument("enumeration cap above hard limit");
  if (g.size() > cap)
    throw std::length_error("graph has " + std::to_string(g.size()) +
                            " vertices, above the enumeration cap of " + std::to_string(cap));
}

inline std::vector<VertexSet> closed_neighborhoods(const DependencyGraph& g) {
  std::vector<VertexSet> nb(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    nb[v].set(v);
    for (auto u : g.neighbors(v)) nb[v].set(u);
  }
  return nb;
}

inline IndexSet to_index_set(const VertexSet& s) {
  IndexSet out;
  for (std::size_t v = s._Find_first(); v < s.size(); v = s._Find_next(v)) out.push_back(v);
  return out;
}

// Bron-Kerbosch with pivoting, run on the complement graph.
inline void bron_kerbosch(const std::vector<VertexSet>& non_adj, VertexSet r, VertexSet p,
                          VertexSet x, std::vector<IndexSet>& out) {
  if (p.none() && x.none()) {
    out.push_back(to_index_set(r));
    return;
  }
  const VertexSet px = p | x;
  std::size_t pivot = px._Find_first();
  std::size_t best = 0;
  for (std::size_t u = pivot; u < px.size(); u = px._Find_next(u)) {
    auto c = (p & non_adj[u]).count();
    if (c >= best) {
      if (c > best || u < pivot) pivot = u;
      best = c;
    }
  }
  VertexSet candidates = p & ~non_adj[pivot];
  for (std::size_t v = candidates._Find_first(); v < candidates.size();
       v = candidates._Find_next(v)) {
    VertexSet rv = r;
    rv.set(v);
    bron_kerbosch(non_adj, rv, p & non_adj[v], x & non_adj[v], out);
    p.reset(v);
    x.set(v);
  }
}

}  // namespace detail

/// All inclusion-maximal independent sets, sorted lexicographically.
inline std::vector<IndexSet> maximal_independent_sets(const DependencyGraph& g,
                                                      std::size_t cap = kDefaultEnumerationCap) {
  detail::check_cap(g, cap);
  const std::size_t n = g.size();
  if (n == 0) return {};
  // non_adj[v]: vertices other than v not adjacent to v.
  std::vector<VertexSet> non_adj(n);
  auto closed = detail::closed_neighborhoods(g);
  VertexSet all;
  for (std::size_t v = 0; v < n; ++v) all.set(v);
  for (std::size_t v = 0; v < n; ++v) non_adj[v] = all & ~closed[v];
  std::vector<IndexSet> out;
  detail::bron_kerbosch(non_adj, VertexSet{}, all, VertexSet{}, out);
  std::sort(out.begin(), out.end());
  return out;
}

struct ChromaticResult {
  std::size_t chromatic_number = 0;
  /// Color classes; a partition of [n] into independent sets.
  std::vector<IndexSet> cover;
};

namespace detail {

class ColoringSearch {
 public:
  explicit ColoringSearch(const DependencyGraph& g) : g_(g), color_(g.size(), -1) {}

  ChromaticResult run() {
    const std::size_t n = g_.size();
    best_ = n + 1;
    lower_ = greedy_clique_size();
    search(0, 0);
    ChromaticResult res;
    res.chromatic_number = best_;
    res.cover.assign(best_, {});
    for (std::size_t v = 0; v < n; ++v) res.cover[static_cast<std::size_t>(best_color_[v])].push_back(v);
    return res;
  }

 private:
  std::size_t greedy_clique_size() const {
    std::size_t best = g_.size() ? 1 : 0;
    for (std::size_t s = 0; s < g_.size(); ++s) {
      IndexSet clique{s};
      for (auto u : g_.neighbors(s)) {
        bool ok = true;
        for (auto c : clique) ok = ok && g_.adjacent(u, c);
        if (ok) clique.push_back(u);
      }
      best = std::max(best, clique.size());
    }
    return best;
  }

  // DSATUR choice: most distinct neighbor colors, then highest degree, then lowest index.
  std::size_t pick() const {
    std::size_t pick = g_.size();
    std::size_t best_sat = 0, best_deg = 0;
    for (std::size_t v = 0; v < g_.size(); ++v) {
      if (color_[v] >= 0) continue;
      std::vector<bool> seen;
      std::size_t sat = 0;
      for (auto u : g_.neighbors(v)) {
        int c = color_[u];
        if (c < 0) continue;
        if (static_cast<std::size_t>(c) >= seen.size()) seen.resize(static_cast<std::size_t>(c) + 1);
        if (!seen[static_cast<std::size_t>(c)]) {
          seen[static_cast<std::size_t>(c)] = true;
          ++sat;
        }
      }
      const std::size_t deg = g_.degree(v);
      if (pick == g_.size() || sat > best_sat || (sat == best_sat && deg > best_deg)) {
        pick = v;
        best_sat = sat;
        best_deg = deg;
      }
    }
    return pick;
  }

  bool usable(std::size_t v, int c) const {
    for (auto u : g_.neighbors(v))
      if (color_[u] == c) return false;
    return true;
  }

  void search(std::size_t colored, std::size_t used) {
    if (used >= best_ || best_ == lower_) return;
    if (colored == g_.size()) {
      best_ = used;
      best_color_ = color_;
      return;
    }
    const std::size_t v = pick();
    for (std::size_t c = 0; c < used; ++c) {
      if (!usable(v, static_cast<int>(c))) continue;
      color_[v] = static_cast<int>(c);
      search(colored + 1, used);
      color_[v] = -1;
      if (best_ == lower_) return;
    }
    if (used + 1 < best_) {
      color_[v] = static_cast<int>(used);
      search(colored + 1, used + 1);
      color_[v] = -1;
    }
  }

  const DependencyGraph& g_;
  std::vector<int> color_;
  std::vector<int> best_color_;
  std::size_t best_ = 0;
  std::size_t lower_ = 0;
};

}  // namespace detail

/// Exact chromatic number with a witness partition into independent sets.
inline ChromaticResult chromatic_number(const DependencyGraph& g,
                                        std::size_t cap = kDefaultEnumerationCap) {
  detail::check_cap(g, cap);
  if (g.size() == 0) return {};
  return detail::ColoringSearch(g).run();
}

struct IndependentSetResult {
  Rational weight;
  IndexSet set;
};

/// Exact maximum-weight independent set for nonnegative weights. The
/// remaining vertex set is split into connected components; inside a
/// component the search branches on the lowest-index vertex. Subproblems are
/// memoized on the remaining vertex set, so graphs of small bandwidth (per
/// component) stay polynomial. Throws std::length_error once more than
/// `state_budget` distinct subproblems have been visited.
inline IndependentSetResult max_weight_independent_set(const DependencyGraph& g,
                                                       const std::vector<Rational>& weights,
                                                       std::size_t state_budget = 4'000'000) {
  const std::size_t n = g.size();
  if (n > kMaxCoverVertices) throw std::length_error("graph too large for independent-set search");
  if (weights.size() != n) throw std::invalid_argument("weight vector size mismatch");
  for (const auto& w : weights)
    if (w < 0) throw std::invalid_argument("negative vertex weight");

  struct Entry {
    Rational value;
    bool take = false;
    std::vector<VertexSet> parts;  // set when `rest` is disconnected
  };
  const auto closed = detail::closed_neighborhoods(g);
  std::unordered_map<VertexSet, Entry> memo;

  auto component_of = [&](const VertexSet& rest, std::size_t v) {
    VertexSet comp, frontier;
    frontier.set(v);
    while (frontier.any()) {
      comp |= frontier;
      VertexSet next;
      for (std::size_t u = frontier._Find_first(); u < frontier.size(); u = frontier._Find_next(u)) next |= closed[u];
      frontier = next & rest & ~comp;
    }
    return comp;
  };

  auto solve = [&](auto&& self, const VertexSet& rest) -> const Rational& {
    static const Rational zero(0);
    if (rest.none()) return zero;
    if (auto it = memo.find(rest); it != memo.end()) return it->second.value;
    if (memo.size() >= state_budget)
      throw std::length_error("independent-set search exceeded its state budget");
    const std::size_t v = rest._Find_first();
    Entry e;
    const VertexSet first = component_of(rest, v);
    if (first != rest) {
      e.value = 0;
      for (VertexSet left = rest; left.any();) {
        const VertexSet comp = left == rest ? first : component_of(left, left._Find_first());
        e.value += self(self, comp);
        e.parts.push_back(comp);
        left &= ~comp;
      }
      return memo.emplace(rest, std::move(e)).first->second.value;
    }
    VertexSet without = rest;
    without.reset(v);
    if ((rest & closed[v]).count() == 1) {
      e.value = weights[v] + self(self, without);
      e.take = true;
    } else {
      Rational take = weights[v] + self(self, rest & ~closed[v]);
      const Rational& skip = self(self, without);
      if (take > skip) {
        e.value = std::move(take);
        e.take = true;
      } else {
        e.value = skip;
      }
    }
    return memo.emplace(rest, std::move(e)).first->second.value;
  };

  VertexSet all;
  for (std::size_t v = 0; v < n; ++v) all.set(v);
  IndependentSetResult res;
  res.weight = solve(solve, all);
  std::vector<VertexSet> todo{all};
  while (!todo.empty()) {
    VertexSet rest = todo.back();
    todo.pop_back();
    while (rest.any()) {
      const auto& e = memo.at(rest);
      if (!e.parts.empty()) {
        todo.insert(todo.end(), e.parts.begin(), e.parts.end());
        break;
      }
      const std::size_t v = rest._Find_first();
      if (e.take) {
        res.set.push_back(v);
        rest &= ~closed[v];
      } else {
        rest.reset(v);
      }
    }
  }
  std::sort(res.set.begin(), res.set.end());
  return res;
}

struct FractionalChromaticResult {
  Rational value;
  /// Optimal proper fractional cover; its parts are maximal independent sets.
  FractionalCover cover;
  /// Optimal dual solution: vertex weights y >= 0 with sum_v y_v = value and
  /// sum_{v in I} y_v <= 1 for every independent set I.
  std::vector<Rational> vertex_weights;
};

namespace detail {

// Restricted-master simplex for the covering LP. Column layout:
//   [0, n)    artificial variables (their tableau columns hold B^{-1})
//   [n, 2n)   surplus variables
//   [2n, ...) independent-set columns
class CoveringSimplex {
 public:
  explicit CoveringSimplex(std::size_t n)
      : n_(n), cols_(2 * n, std::vector<Rational>(n, Rational(0))), rhs_(n, Rational(1)), basis_(n) {
    for (std::size_t i = 0; i < n; ++i) {
      cols_[i][i] = 1;
      cols_[n + i][i] = -1;
      basis_[i] = i;
    }
  }

  std::size_t add_column(const IndexSet& set) {
    std::vector<Rational> col(n_, Rational(0));
    for (auto v : set)
      for (std::size_t r = 0; r < n_; ++r) col[r] += cols_[v][r];  // B^{-1} e_v
    cols_.push_back(std::move(col));
    sets_.push_back(set);
    return cols_.size() - 1;
  }

  // Phase 1 then phase 2; returns after phase 2 optimality on current columns.
  void solve() {
    if (!phase1_done_) {
      optimize(/*phase=*/1);
      Rational infeas = 0;
      for (std::size_t r = 0; r < n_; ++r)
        if (basis_[r] < n_) infeas += rhs_[r];
      if (infeas != 0) throw std::logic_error("covering LP infeasible; columns do not cover");
      drive_out_artificials();
      phase1_done_ = true;
    }
    optimize(/*phase=*/2);
  }

  std::vector<Rational> duals() const {
    std::vector<Rational> y(n_, Rational(0));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t r = 0; r < n_; ++r)
        if (cost(basis_[r], 2) != 0) y[i] += cols_[i][r];
    return y;
  }

  Rational objective() const {
    Rational z = 0;
    for (std::size_t r = 0; r < n_; ++r) z += cost(basis_[r], 2) * rhs_[r];
    return z;
  }

  std::vector<CoverPart> primal_parts() const {
    std::vector<CoverPart> parts;
    for (std::size_t r = 0; r < n_; ++r) {
      const std::size_t c = basis_[r];
      if (c >= 2 * n_ && rhs_[r] != 0) parts.push_back({sets_[c - 2 * n_], rhs_[r]});
    }
    std::sort(parts.begin(), parts.end(),
              [](const CoverPart& a, const CoverPart& b) { return a.set < b.set; });
    return parts;
  }

 private:
  Rational cost(std::size_t col, int phase) const {
    if (phase == 1) return col < n_ ? 1 : 0;
    return col >= 2 * n_ ? 1 : 0;
  }

  bool allowed(std::size_t col, int phase) const { return phase == 1 || col >= n_; }

  Rational reduced_cost(std::size_t col, int phase) const {
    Rational d = cost(col, phase);
    for (std::size_t r = 0; r < n_; ++r) {
      const Rational cb = cost(basis_[r], phase);
      if (cb != 0 && cols_[col][r] != 0) d -= cb * cols_[col][r];
    }
    return d;
  }

  bool is_basic(std::size_t col) const {
    return std::find(basis_.begin(), basis_.end(), col) != basis_.end();
  }

  // Bland's rule: lowest-index improving column, lowest-basis-index ratio tie.
  void optimize(int phase) {
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t c = 0; c < cols_.size(); ++c) {
        if (!allowed(c, phase) || is_basic(c)) continue;
        if (reduced_cost(c, phase) < 0) {
          enter = c;
          break;
        }
      }
      if (!enter) return;
      const auto& col = cols_[*enter];
      std::optional<std::size_t> leave;
      Rational best_ratio;
      for (std::size_t r = 0; r < n_; ++r) {
        if (col[r] <= 0) continue;
        Rational ratio = rhs_[r] / col[r];
        if (!leave || ratio < best_ratio || (ratio == best_ratio && basis_[r] < basis_[*leave])) {
          leave = r;
          best_ratio = std::move(ratio);
        }
      }
      if (!leave) throw std::logic_error("covering LP unbounded");
      pivot(*leave, *enter);
    }
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < n_; ++r) {
      if (basis_[r] >= n_) continue;
      for (std::size_t c = n_; c < cols_.size(); ++c) {
        if (!is_basic(c) && cols_[c][r] != 0) {
          pivot(r, c);
          break;
        }
      }
    }
  }

  void pivot(std::size_t row, std::size_t enter) {
    const std::vector<Rational> e = cols_[enter];
    const Rational p = e[row];
    for (auto& col : cols_) {
      if (col[row] == 0) continue;
      const Rational t = col[row] / p;
      for (std::size_t r = 0; r < n_; ++r)
        if (r != row && e[r] != 0) col[r] -= e[r] * t;
      col[row] = t;
    }
    const Rational t = rhs_[row] / p;
    for (std::size_t r = 0; r < n_; ++r)
      if (r != row && e[r] != 0) rhs_[r] -= e[r] * t;
    rhs_[row] = t;
    basis_[row] = enter;
  }

  std::size_t n_;
  std::vector<std::vector<Rational>> cols_;
  std::vector<IndexSet> sets_;
  std::vector<Rational> rhs_;
  std::vector<std::size_t> basis_;
  bool phase1_done_ = false;
};

inline IndexSet extend_to_maximal(const DependencyGraph& g, IndexSet set) {
  std::vector<bool> blocked(g.size(), false);
  for (auto v : set) {
    blocked[v] = true;
    for (auto u : g.neighbors(v)) blocked[u] = true;
  }
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (blocked[v]) continue;
    set.push_back(v);
    blocked[v] = true;
    for (auto u : g.neighbors(v)) blocked[u] = true;
  }
  return sorted_unique(std::move(set));
}

}  // namespace detail

/// Exact fractional chromatic number with an optimal cover and dual weights.
/// Works beyond the enumeration cap as long as the independent-set pricing
/// stays within its state budget (e.g. banded graphs with hundreds of vertices).
inline FractionalChromaticResult fractional_chromatic(const DependencyGraph& g) {
  const std::size_t n = g.size();
  if (n > kMaxCoverVertices) throw std::length_error("graph too large for fractional covers");
  FractionalChromaticResult res;
  if (n == 0) {
    res.value = 0;
    return res;
  }

  detail::CoveringSimplex lp(n);
  std::vector<IndexSet> seen;
  auto add = [&](IndexSet s) {
    if (std::find(seen.begin(), seen.end(), s) != seen.end()) return false;
    seen.push_back(s);
    lp.add_column(s);
    return true;
  };
  for (std::size_t v = 0; v < n; ++v) add(detail::extend_to_maximal(g, {v}));

  for (;;) {
    lp.solve();
    auto y = lp.duals();
    auto priced = max_weight_independent_set(g, y);
    if (priced.weight <= 1) {
      res.value = lp.objective();
      res.cover = FractionalCover(n, lp.primal_parts());
      res.vertex_weights = std::move(y);
      return res;
    }
    if (!add(detail::extend_to_maximal(g, priced.set)))
      throw std::logic_error("column generation stalled on an existing column");
  }
}

struct CoverCheck {
  bool fractional = false;
  bool proper = false;
  bool exact = false;
};

inline CoverCheck verify_cover(const FractionalCover& c, const DependencyGraph& g) {
  if (c.size() != g.size())
    throw std::invalid_argument("cover ground set size " + std::to_string(c.size()) +
                                " does not match graph size " + std::to_string(g.size()));
  CoverCheck out;
  const auto cov = c.coverage();
  out.fractional = std::all_of(cov.begin(), cov.end(), [](const Rational& x) { return x >= 1; });
  out.exact = std::all_of(cov.begin(), cov.end(), [](const Rational& x) { return x == 1; });
  out.proper = std::all_of(c.parts().begin(), c.parts().end(),
                           [&](const CoverPart& p) { return g.independent(p.set); });
  return out;
}

/// Turns a fractional cover of [n] into an exact one (every element covered
/// with total weight exactly 1) with the same total weight. Every output part
/// is a subset of an input part, so properness carries over.
///
/// Elements are processed in increasing order; while one is over-covered, the
/// lowest-weight part containing it is split into a copy with the element and
/// a copy without it, moving the excess to the latter. Weight that would land
/// on an empty part is restored afterwards by splitting parts of size >= 2,
/// which is possible exactly when the total weight is at most n.
inline FractionalCover exactify(const FractionalCover& c) {
  const std::size_t n = c.size();
  const auto cov0 = c.coverage();
  for (std::size_t v = 0; v < n; ++v)
    if (cov0[v] < 1)
      throw std::invalid_argument("not a fractional cover: element " + std::to_string(v) +
                                  " has coverage " + format_rational(cov0[v]));
  const Rational total = c.total_weight();
  if (total > Rational(n))
    throw std::invalid_argument("total weight " + format_rational(total) +
                                " exceeds the ground-set size; no exact cover keeps it");

  std::vector<CoverPart> parts;
  for (const auto& p : c.parts())
    if (p.weight != 0) parts.push_back(p);

  Rational lost = 0;
  for (std::size_t v = 0; v < n; ++v) {
    Rational cov = 0;
    for (const auto& p : parts)
      if (std::binary_search(p.set.begin(), p.set.end(), v)) cov += p.weight;
    while (cov > 1) {
      std::optional<std::size_t> pick;
      for (std::size_t j = 0; j < parts.size(); ++j) {
        const auto& p = parts[j];
        if (p.weight == 0 || !std::binary_search(p.set.begin(), p.set.end(), v)) continue;
        if (!pick || p.weight < parts[*pick].weight) pick = j;
      }
      const Rational excess = cov - 1;
      const Rational moved = std::min(parts[*pick].weight, excess);
      IndexSet rest;
      for (auto u : parts[*pick].set)
        if (u != v) rest.push_back(u);
      parts[*pick].weight -= moved;
      if (rest.empty()) lost += moved;
      else parts.push_back({std::move(rest), moved});
      cov -= moved;
    }
  }

  while (lost > 0) {
    auto it = std::find_if(parts.begin(), parts.end(),
                           [](const CoverPart& p) { return p.weight > 0 && p.set.size() >= 2; });
    if (it == parts.end()) throw std::logic_error("cannot restore weight; cover is all singletons");
    const Rational moved = std::min(it->weight, lost);
    IndexSet head{it->set.front()};
    IndexSet tail(it->set.begin() + 1, it->set.end());
    it->weight -= moved;
    parts.push_back({std::move(head), moved});
    parts.push_back({std::move(tail), moved});
    lost -= moved;
  }

  std::sort(parts.begin(), parts.end(),
            [](const CoverPart& a, const CoverPart& b) { return a.set < b.set; });
  std::vector<CoverPart> merged;
  for (auto& p : parts) {
    if (p.weight == 0) continue;
    if (!merged.empty() && merged.back().set == p.set) merged.back().weight += p.weight;
    else merged.push_back(std::move(p));
  }
  return FractionalCover(n, std::move(merged));
}

}  // namespace ldconc
