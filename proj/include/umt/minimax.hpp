#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "umt/metric_space.hpp"

namespace umt {

// A spanning tree as a parent array (parent[root] == root).  Built by Prim
// from vertex 0 with lowest-index tie-breaking, so it is deterministic.
struct SpanningTree {
  std::vector<std::size_t> parent;
};

// Prim MST over the complete graph with weights d, optionally skipping one
// edge (skip_a, skip_b).  Assumes n >= 1 and the graph minus the skipped edge
// is connected (always true for n >= 3).
inline SpanningTree minimum_spanning_tree(const FiniteMetricSpace& s,
                                          std::size_t skip_a = static_cast<std::size_t>(-1),
                                          std::size_t skip_b = static_cast<std::size_t>(-1)) {
  std::size_t n = s.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(n, inf);
  std::vector<std::size_t> parent(n), from(n, 0);
  std::vector<bool> used(n, false);
  best[0] = 0;
  for (std::size_t it = 0; it < n; ++it) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!used[v] && (u == n || best[v] < best[u])) u = v;
    used[u] = true;
    parent[u] = u == 0 ? 0 : from[u];
    for (std::size_t v = 0; v < n; ++v) {
      if (used[v]) continue;
      if ((u == skip_a && v == skip_b) || (u == skip_b && v == skip_a)) continue;
      double w = s.dist(u, v);
      if (w < best[v]) {
        best[v] = w;
        from[v] = u;
      }
    }
  }
  return SpanningTree{std::move(parent)};
}

// Max edge weight along the tree path between every pair: the minimax (or
// bottleneck) chain value over the complete graph.  O(n^2) by rooted DFS.
inline std::vector<double> tree_path_maxima(const FiniteMetricSpace& s,
                                            const SpanningTree& t) {
  std::size_t n = s.size();
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t v = 0; v < n; ++v)
    if (t.parent[v] != v) children[t.parent[v]].push_back(v);
  std::vector<double> out(n * n, 0.0);
  // grow from each source along the tree, tracking the running max edge
  std::vector<std::size_t> stack;
  for (std::size_t src = 0; src < n; ++src) {
    std::vector<bool> seen(n, false);
    seen[src] = true;
    stack.push_back(src);
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      auto relax = [&](std::size_t v) {
        if (seen[v]) return;
        out[src * n + v] = std::max(out[src * n + u], s.dist(u, v));
        seen[v] = true;
        stack.push_back(v);
      };
      if (t.parent[u] != u) relax(t.parent[u]);
      for (std::size_t c : children[u]) relax(c);
    }
  }
  return out;
}

// Vertex sequence of the tree path between a and b.
inline std::vector<std::size_t> tree_path(const SpanningTree& t, std::size_t a,
                                          std::size_t b) {
  auto chain_to_root = [&](std::size_t v) {
    std::vector<std::size_t> c{v};
    while (t.parent[v] != v) {
      v = t.parent[v];
      c.push_back(v);
    }
    return c;
  };
  std::vector<std::size_t> ca = chain_to_root(a), cb = chain_to_root(b);
  // strip the common tail above the meeting point
  while (ca.size() >= 2 && cb.size() >= 2 && ca[ca.size() - 1] == cb[cb.size() - 1] &&
         ca[ca.size() - 2] == cb[cb.size() - 2]) {
    ca.pop_back();
    cb.pop_back();
  }
  if (!ca.empty() && !cb.empty() && ca.back() == cb.back()) cb.pop_back();
  for (std::size_t i = cb.size(); i-- > 0;) ca.push_back(cb[i]);
  return ca;
}

}  // namespace umt
