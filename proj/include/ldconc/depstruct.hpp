// Dependence structures for locally dependent random variables.
//
// Three ways of declaring which observed variables X_0..X_{n-1} may depend
// on each other:
//   * Ld1Neighborhoods: X_i is independent of everything outside A_i.
//   * DependencyGraph:  undirected graph, adjacency = possible dependence.
//   * HyperDependence:  X_i is a function of the independent sources Y_{S_i}.
#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ldconc {

using IndexSet = std::vector<std::size_t>;

namespace detail {

inline IndexSet sorted_unique(IndexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline bool sorted_intersects(const IndexSet& a, const IndexSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

}  // namespace detail

/// Undirected simple graph on {0, ..., n-1}, stored as sorted adjacency lists.
class DependencyGraph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  DependencyGraph() = default;

  /// Builds the canonical graph. Duplicate edges (in either orientation) are
  /// merged; out-of-range endpoints and self-loops are rejected.
  DependencyGraph(std::size_t n, const std::vector<Edge>& edges) : adj_(n) {
    for (auto [u, v] : edges) {
      if (u >= n || v >= n)
        throw std::invalid_argument("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                    ") out of range for n=" + std::to_string(n));
      if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
      adj_[u].push_back(v);
      adj_[v].push_back(u);
    }
    for (auto& a : adj_) a = detail::sorted_unique(std::move(a));
  }

  std::size_t size() const { return adj_.size(); }
  const IndexSet& neighbors(std::size_t v) const { return adj_.at(v); }
  std::size_t degree(std::size_t v) const { return adj_.at(v).size(); }

  bool adjacent(std::size_t u, std::size_t v) const {
    const auto& a = adj_.at(u);
    return std::binary_search(a.begin(), a.end(), v);
  }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (const auto& a : adj_) d = std::max(d, a.size());
    return d;
  }

  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& a : adj_) e += a.size();
    return e / 2;
  }

  /// Edges (u, v) with u < v in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (std::size_t u = 0; u < adj_.size(); ++u)
      for (auto v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  /// True iff no two members of `s` are adjacent.
  bool independent(const IndexSet& s) const {
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = a + 1; b < s.size(); ++b)
        if (adjacent(s[a], s[b])) return false;
    return true;
  }

  friend bool operator==(const DependencyGraph&, const DependencyGraph&) = default;

 private:
  std::vector<IndexSet> adj_;
};

inline DependencyGraph build_graph(std::size_t n, const std::vector<DependencyGraph::Edge>& edges) {
  return DependencyGraph(n, edges);
}

/// LD1 neighborhoods A_0..A_{n-1}; every A_i contains i.
class Ld1Neighborhoods {
 public:
  Ld1Neighborhoods() = default;

  explicit Ld1Neighborhoods(std::vector<IndexSet> sets) : sets_(std::move(sets)) {
    const std::size_t n = sets_.size();
    for (std::size_t i = 0; i < n; ++i) {
      sets_[i] = detail::sorted_unique(std::move(sets_[i]));
      for (auto j : sets_[i])
        if (j >= n) throw std::invalid_argument("neighborhood index out of range");
      if (!std::binary_search(sets_[i].begin(), sets_[i].end(), i))
        throw std::invalid_argument("neighborhood A_" + std::to_string(i) + " does not contain " +
                                    std::to_string(i));
    }
  }

  std::size_t size() const { return sets_.size(); }
  const IndexSet& operator[](std::size_t i) const { return sets_.at(i); }
  const std::vector<IndexSet>& sets() const { return sets_; }

 private:
  std::vector<IndexSet> sets_;
};

/// Dependency graph with an edge {i, j} whenever i is in A_j or j is in A_i.
inline DependencyGraph ld1_graph(const Ld1Neighborhoods& nbhd) {
  std::vector<DependencyGraph::Edge> edges;
  for (std::size_t i = 0; i < nbhd.size(); ++i)
    for (auto j : nbhd[i])
      if (j != i) edges.emplace_back(i, j);
  return DependencyGraph(nbhd.size(), edges);
}

/// X_i depends on the independent sources Y_{S_i}, S_i a nonempty subset of [N].
class HyperDependence {
 public:
  HyperDependence() = default;

  HyperDependence(std::size_t source_count, std::vector<IndexSet> sources_of)
      : source_count_(source_count), S_(std::move(sources_of)), R_(source_count) {
    for (std::size_t i = 0; i < S_.size(); ++i) {
      S_[i] = detail::sorted_unique(std::move(S_[i]));
      if (S_[i].empty())
        throw std::invalid_argument("S_" + std::to_string(i) + " is empty");
      for (auto j : S_[i]) {
        if (j >= source_count)
          throw std::invalid_argument("source index " + std::to_string(j) + " out of range for N=" +
                                      std::to_string(source_count));
        R_[j].push_back(i);
      }
    }
  }

  /// n: number of observed variables.
  std::size_t size() const { return S_.size(); }
  /// N: number of independent sources.
  std::size_t source_count() const { return source_count_; }
  const IndexSet& sources_of(std::size_t i) const { return S_.at(i); }
  const IndexSet& dependents_of(std::size_t j) const { return R_.at(j); }
  const std::vector<IndexSet>& source_sets() const { return S_; }

 private:
  std::size_t source_count_ = 0;
  std::vector<IndexSet> S_;
  std::vector<IndexSet> R_;
};

/// Edge {i, j} iff S_i and S_j share a source.
inline DependencyGraph derived_graph(const HyperDependence& hd) {
  std::vector<DependencyGraph::Edge> edges;
  for (std::size_t j = 0; j < hd.source_count(); ++j) {
    const auto& r = hd.dependents_of(j);
    for (std::size_t a = 0; a < r.size(); ++a)
      for (std::size_t b = a + 1; b < r.size(); ++b) edges.emplace_back(r[a], r[b]);
  }
  return DependencyGraph(hd.size(), edges);
}

struct HdParams {
  std::size_t k = 0;           // max_i |S_i|
  std::size_t l = 0;           // max_j |R_j| over sources with R_j nonempty
  std::size_t max_degree = 0;  // of derived_graph
  /// Smallest m with (HD, m): max degree <= m - 1.
  std::size_t m() const { return max_degree + 1; }
};

inline HdParams hd_params(const HyperDependence& hd) {
  HdParams p;
  for (const auto& s : hd.source_sets()) p.k = std::max(p.k, s.size());
  for (std::size_t j = 0; j < hd.source_count(); ++j) p.l = std::max(p.l, hd.dependents_of(j).size());
  p.max_degree = derived_graph(hd).max_degree();
  return p;
}

struct HdReduction {
  HyperDependence reduced;
  /// blocks[b]: the original sources making up composite source b.
  std::vector<IndexSet> blocks;
};

/// Regroups sources so that the result satisfies (HD, m, m) with
/// m = max degree of the derived graph + 1. Source j goes to the block of the
/// smallest i with j in S_i; empty blocks are dropped.
inline HdReduction hd_reduce(const HyperDependence& hd) {
  const std::size_t n = hd.size();
  std::vector<IndexSet> by_owner(n);
  for (std::size_t j = 0; j < hd.source_count(); ++j) {
    const auto& r = hd.dependents_of(j);
    if (!r.empty()) by_owner[r.front()].push_back(j);
  }

  HdReduction out;
  std::vector<std::size_t> block_of(hd.source_count(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (by_owner[i].empty()) continue;
    for (auto j : by_owner[i]) block_of[j] = out.blocks.size();
    out.blocks.push_back(std::move(by_owner[i]));
  }

  std::vector<IndexSet> new_sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto j : hd.sources_of(i)) new_sets[i].push_back(block_of[j]);
  }
  out.reduced = HyperDependence(out.blocks.size(), std::move(new_sets));
  return out;
}

}  // namespace ldconc
