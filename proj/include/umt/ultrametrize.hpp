#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <tuple>
#include <vector>

#include "umt/errors.hpp"
#include "umt/metric_space.hpp"
#include "umt/minimax.hpp"
#include "umt/props.hpp"

namespace umt {

// Largest ultrametric below the input: d'(x,y) = minimum over chains from x
// to y of the maximum step, realized as the maximum edge on the minimum
// spanning tree path.  Values are elements of the input distance multiset,
// so comparisons against chain oracles are exact.
inline FiniteMetricSpace subdominant_ultrametric(const FiniteMetricSpace& s) {
  std::size_t n = s.size();
  if (n < 2) throw DegenerateInput("subdominant ultrametric needs at least 2 points");
  SpanningTree mst = minimum_spanning_tree(s);
  std::vector<double> flat = tree_path_maxima(s, mst);
  return FiniteMetricSpace::checked(s.labels(), std::move(flat), true);
}

struct Dendrogram {
  struct Node {
    double height = 0.0;                 // diameter of the leaf set
    std::vector<std::size_t> children;   // node ids, ordered by least leaf
    std::optional<std::size_t> leaf;     // point index when this is a leaf
  };
  std::vector<Node> nodes;
  std::size_t root = 0;
  std::vector<std::string> labels;  // per point index

  bool is_leaf(std::size_t id) const { return nodes[id].leaf.has_value(); }
};

namespace detail {

struct DsuCluster {
  std::size_t node;                 // current dendrogram node id
  std::vector<std::size_t> leaves;  // point indices
};

}  // namespace detail

// Merge tree of an ultrametric space.  Verifies the strong triangle
// inequality at the given relative tolerance first (NotUltrametric with a
// witness otherwise).  Merges run in order of increasing distance with ties
// broken toward the pair containing the lowest point index; parent/child
// nodes whose heights agree within the tolerance are contracted, so every
// internal node keeps at least two children and strictly smaller-height
// children.  Node heights are recomputed as exact leaf-set diameters.
inline Dendrogram build_dendrogram(const FiniteMetricSpace& s, double tol = 1e-12) {
  std::size_t n = s.size();
  if (n == 0) throw DegenerateInput("dendrogram needs at least 1 point");
  UltrametricityResult u = check_ultrametric(s, tol);
  if (!u.is_ultrametric)
    throw NotUltrametric(u.witness->x, u.witness->y, u.witness->z);

  Dendrogram d;
  d.labels = s.labels();
  std::vector<std::size_t> cluster_of(n);
  std::vector<detail::DsuCluster> clusters(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.nodes.push_back(Dendrogram::Node{0.0, {}, i});
    cluster_of[i] = i;
    clusters[i] = detail::DsuCluster{i, {i}};
  }
  if (n == 1) {
    d.root = 0;
    return d;
  }

  std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      edges.emplace_back(s.dist(i, j), i, j);
  std::sort(edges.begin(), edges.end());

  auto find = [&](std::size_t p) { return cluster_of[p]; };
  std::size_t live = n;
  for (const auto& [w, a, b] : edges) {
    std::size_t ca = find(a), cb = find(b);
    if (ca == cb) continue;
    // diameter of the union = max of parts and the largest cross distance
    double h = std::max(d.nodes[clusters[ca].node].height,
                        d.nodes[clusters[cb].node].height);
    for (std::size_t pa : clusters[ca].leaves)
      for (std::size_t pb : clusters[cb].leaves)
        h = std::max(h, s.dist(pa, pb));

    auto near = [&](double x, double y) {
      return std::abs(x - y) <= tol * std::max(std::abs(x), std::abs(y));
    };
    std::size_t node_a = clusters[ca].node, node_b = clusters[cb].node;
    std::size_t merged = d.nodes.size();
    d.nodes.push_back(Dendrogram::Node{h, {}, std::nullopt});
    auto adopt = [&](std::size_t child) {
      // contract a child whose height matches the new node
      if (!d.nodes[child].leaf && near(d.nodes[child].height, h)) {
        for (std::size_t g : d.nodes[child].children)
          d.nodes[merged].children.push_back(g);
      } else {
        d.nodes[merged].children.push_back(child);
      }
    };
    adopt(node_a);
    adopt(node_b);

    if (clusters[ca].leaves.size() < clusters[cb].leaves.size()) std::swap(ca, cb);
    for (std::size_t p : clusters[cb].leaves) {
      cluster_of[p] = ca;
      clusters[ca].leaves.push_back(p);
    }
    clusters[ca].node = merged;
    d.root = merged;
    if (--live == 1) break;
  }

  // drop orphaned contracted nodes and order children by least leaf index
  std::vector<std::size_t> min_leaf(d.nodes.size(), 0);
  std::vector<bool> keep(d.nodes.size(), false);
  std::vector<std::size_t> order;
  // nodes were appended bottom-up, so children precede parents
  std::vector<std::size_t> remap(d.nodes.size(), 0);
  std::function<void(std::size_t)> mark = [&](std::size_t id) {
    keep[id] = true;
    for (std::size_t c : d.nodes[id].children) mark(c);
  };
  mark(d.root);
  for (std::size_t id = 0; id < d.nodes.size(); ++id) {
    if (!keep[id]) continue;
    if (d.nodes[id].leaf) {
      min_leaf[id] = *d.nodes[id].leaf;
    } else {
      auto& ch = d.nodes[id].children;
      std::sort(ch.begin(), ch.end(),
                [&](std::size_t x, std::size_t y) { return min_leaf[x] < min_leaf[y]; });
      min_leaf[id] = min_leaf[ch.front()];
    }
  }
  Dendrogram out;
  out.labels = d.labels;
  for (std::size_t id = 0; id < d.nodes.size(); ++id) {
    if (!keep[id]) continue;
    remap[id] = out.nodes.size();
    Dendrogram::Node node = d.nodes[id];
    for (auto& c : node.children) c = remap[c];
    out.nodes.push_back(std::move(node));
  }
  out.root = remap[d.root];
  return out;
}

// Materializes the least-common-ancestor metric of a dendrogram: pairs of
// leaves under different children of a node are at that node's height.
inline FiniteMetricSpace dendrogram_metric(const Dendrogram& d) {
  std::size_t n = d.labels.size();
  std::vector<double> flat(n * n, 0.0);
  std::function<std::vector<std::size_t>(std::size_t)> walk =
      [&](std::size_t id) -> std::vector<std::size_t> {
    const auto& node = d.nodes[id];
    if (node.leaf) return {*node.leaf};
    std::vector<std::size_t> mine;
    for (std::size_t c : node.children) {
      std::vector<std::size_t> sub = walk(c);
      for (std::size_t a : mine)
        for (std::size_t b : sub)
          flat[a * n + b] = flat[b * n + a] = node.height;
      mine.insert(mine.end(), sub.begin(), sub.end());
    }
    return mine;
  };
  walk(d.root);
  return FiniteMetricSpace::checked(d.labels, std::move(flat), true);
}

struct DistortionValue {
  double value = 1.0;
  std::size_t a = 0, b = 0;  // worst pair
};

// Max over pairs of d(x,y)/d'(x,y) against the subdominant ultrametric.
inline DistortionValue ultrametrization_distortion(const FiniteMetricSpace& s) {
  std::size_t n = s.size();
  if (n < 2) throw DegenerateInput("distortion needs at least 2 points");
  FiniteMetricSpace sub = subdominant_ultrametric(s);
  DistortionValue out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double r = s.dist(i, j) / sub.dist(i, j);
      if (r > out.value) {
        out.value = r;
        out.a = i;
        out.b = j;
      }
    }
  return out;
}

}  // namespace umt
