#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "polyfat/error.hpp"
#include "polyfat/geometry.hpp"

namespace polyfat {

/// Simple undirected graph on vertices 0..n-1.
class Graph {
 public:
  explicit Graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges = {}) : n_(n) {
    for (auto [u, v] : edges) add_edge(u, v);
  }

  void add_edge(std::size_t u, std::size_t v) {
    if (u >= n_ || v >= n_) throw DomainError("edge endpoint out of range");
    if (u == v) throw DomainError("self-loops are not allowed");
    edges_.insert({std::min(u, v), std::max(u, v)});
  }

  std::size_t size() const { return n_; }
  const std::set<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
  bool has_edge(std::size_t u, std::size_t v) const { return edges_.count({std::min(u, v), std::max(u, v)}) > 0; }

  bool is_independent(const std::vector<std::size_t>& vs) const {
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j)
        if (vs[i] == vs[j] || has_edge(vs[i], vs[j])) return false;
    return true;
  }

 private:
  std::size_t n_;
  std::set<std::pair<std::size_t, std::size_t>> edges_;
};

inline Vector basis_vector(std::size_t n, std::size_t i) {
  Vector e = Vector::Zero(static_cast<Eigen::Index>(n));
  e[static_cast<Eigen::Index>(i)] = 1.0;
  return e;
}

/// Negative point e_i per vertex, a positive at the origin, and a positive at
/// (e_i + e_j) / 2 per edge. Order: negatives, origin, edges.
inline Sample graph_to_instance(const Graph& g) {
  const std::size_t n = g.size();
  if (n < 1) throw DomainError("graph needs at least one vertex");
  Sample s;
  for (std::size_t i = 0; i < n; ++i) s.emplace_back(basis_vector(n, i), Label::Negative);
  s.emplace_back(Vector::Zero(static_cast<Eigen::Index>(n)), Label::Positive);
  for (auto [u, v] : g.edges()) s.emplace_back(0.5 * (basis_vector(n, u) + basis_vector(n, v)), Label::Positive);
  return s;
}

/// w_j = -1/sqrt(k) on the independent set (k vertices), b = 3/(4 sqrt(k)).
/// Values: -1/(4 sqrt k) at its vertices, 3/(4 sqrt k) at the origin, at
/// least 1/(4 sqrt k) at every edge midpoint.
inline Hyperplane independent_set_hyperplane(const Graph& g, const std::vector<std::size_t>& vs) {
  if (vs.empty()) throw DomainError("independent set must be nonempty");
  for (std::size_t v : vs)
    if (v >= g.size()) throw DomainError("vertex out of range");
  if (!g.is_independent(vs)) throw DomainError("vertex set is not independent");
  const double r = std::sqrt(static_cast<double>(vs.size()));
  Vector w = Vector::Zero(static_cast<Eigen::Index>(g.size()));
  for (std::size_t v : vs) w[static_cast<Eigen::Index>(v)] = -1.0 / r;
  return Hyperplane(std::move(w), 3.0 / (4.0 * r));
}

inline constexpr std::size_t kBruteForceMaxVertices = 20;

/// Largest independent set, by enumeration over vertex subsets; ties go to
/// the set with the smallest bitmask.
inline std::vector<std::size_t> max_independent_set(const Graph& g) {
  const std::size_t n = g.size();
  if (n > kBruteForceMaxVertices) throw DomainError("brute force limited to " + std::to_string(kBruteForceMaxVertices) + " vertices");
  std::vector<std::uint32_t> adj(n, 0);
  for (auto [u, v] : g.edges()) {
    adj[u] |= std::uint32_t{1} << v;
    adj[v] |= std::uint32_t{1} << u;
  }
  std::uint32_t best = 0;
  int best_size = 0;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    const int size = std::popcount(mask);
    if (size <= best_size) continue;
    bool ok = true;
    for (std::size_t v = 0; v < n && ok; ++v)
      if ((mask >> v) & 1U) ok = (adj[v] & mask) == 0;
    if (ok) {
      best = mask;
      best_size = size;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < n; ++v)
    if ((best >> v) & 1U) out.push_back(v);
  return out;
}

/// Most negatives of graph_to_instance(g) that one positive-consistent
/// hyperplane can place on its negative side: the independence number.
inline std::size_t brute_force_max_separable(const Graph& g) { return max_independent_set(g).size(); }

/// One independent-set hyperplane per color class, after splitting classes
/// larger than ceil(n / #colors) into chunks of that size (ascending vertex
/// order). Colors are arbitrary integers.
inline Polytope coloring_to_cover(const Graph& g, const std::vector<int>& coloring) {
  const std::size_t n = g.size();
  if (coloring.size() != n) throw DimensionMismatch(n, coloring.size());
  for (auto [u, v] : g.edges())
    if (coloring[u] == coloring[v]) throw DomainError("coloring is not proper");
  std::map<int, std::vector<std::size_t>> classes;
  for (std::size_t v = 0; v < n; ++v) classes[coloring[v]].push_back(v);
  const std::size_t cap = (n + classes.size() - 1) / classes.size();
  Polytope p(n);
  for (const auto& [color, vs] : classes)
    for (std::size_t i = 0; i < vs.size(); i += cap) {
      std::vector<std::size_t> chunk(vs.begin() + static_cast<std::ptrdiff_t>(i),
                                     vs.begin() + static_cast<std::ptrdiff_t>(std::min(vs.size(), i + cap)));
      p.add(independent_set_hyperplane(g, chunk));
    }
  return p;
}

/// Greedy proper coloring in vertex order (smallest free color).
inline std::vector<int> greedy_coloring(const Graph& g) {
  std::vector<int> c(g.size(), -1);
  for (std::size_t v = 0; v < g.size(); ++v) {
    std::vector<char> used(g.size() + 1, 0);
    for (std::size_t u = 0; u < v; ++u)
      if (g.has_edge(u, v)) used[static_cast<std::size_t>(c[u])] = 1;
    int k = 0;
    while (used[static_cast<std::size_t>(k)]) ++k;
    c[v] = k;
  }
  return c;
}

}  // namespace polyfat
