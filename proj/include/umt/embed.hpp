#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "umt/cantor.hpp"
#include "umt/deform.hpp"
#include "umt/distort.hpp"
#include "umt/errors.hpp"
#include "umt/exact.hpp"
#include "umt/metric_space.hpp"
#include "umt/props.hpp"
#include "umt/ultrametrize.hpp"

namespace umt {

enum class EmbedMode { ExactLevel, ExpandDepth };

struct EmbedOptions {
  EmbedMode mode = EmbedMode::ExactLevel;
  ScanOptions scan;               // drives the distortion scans of the result
  bool input_properties = false;  // attach a property report of the input
  double tol = 1e-12;             // cluster-tree tolerance
};

struct EmbeddingResult {
  CantorSpace target;
  std::vector<Word> assignment;  // input point -> word of the target
  FiniteMetricSpace target_metric;
  DistortionReport report;  // distortion of the final map
  std::vector<std::pair<std::string, double>> stage_constants;
  std::optional<PropertyReport> input_properties;
};

inline double stage_constant(const EmbeddingResult& r, const std::string& name) {
  for (const auto& [stage, value] : r.stage_constants)
    if (stage == name) return value;
  throw NotFound("no stage constant named \"" + name + "\"");
}

namespace detail {

// Smallest j >= 0 with lambda^j <= h, decided by exact rational comparison
// (heights are doubles and convert exactly).  Powers are cached across calls.
class LevelQuantizer {
 public:
  explicit LevelQuantizer(BigRational lambda) : lambda_(std::move(lambda)) {
    powers_.push_back(BigRational(1));
  }

  std::int64_t level(double height) {
    BigRational h = rational_from_double(height);
    if (h <= 0 || h > 1) throw InvalidParams("quantized height must lie in (0,1]");
    while (powers_.back() > h) {
      if (powers_.size() > 100'000)
        throw SizeLimitExceeded("level quantization beyond 10^5; lambda is too close to 1");
      powers_.push_back(powers_.back() * lambda_);
    }
    // powers_ is strictly decreasing; first index where it drops to <= h
    std::size_t lo = 0, hi = powers_.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (powers_[mid] <= h) hi = mid;
      else lo = mid + 1;
    }
    return static_cast<std::int64_t>(lo);
  }

 private:
  BigRational lambda_;
  std::vector<BigRational> powers_;
};

}  // namespace detail

// Embeds an ultrametric space into a symbolic Cantor set (F^m, rho) over an
// alphabet of size k with parameter lambda.  The input is scaled to diameter
// at most 1 (the factor is the "scale" stage constant); every cluster of its
// merge tree is quantized to the level j with lambda^j <= diameter <
// lambda^(j-1); nested clusters that land on one level are contracted; and
// the children of each cluster are coded by distinct symbols at the cluster's
// level.  Each pair then separates at its own cluster's level, giving
//   lambda * d(x,y) < rho(f(x), f(y)) <= d(x,y)
// in the scaled metric.  ExactLevel mode needs branching at most k and
// reports the smallest sufficient alphabet via AlphabetTooSmall; ExpandDepth
// codes wider branchings by blocks of ceil(log_k branching) symbols shifted
// past the parent's block, relaxing the lower bound to
//   d(x,y) * lambda^(shift + block) < rho(f(x), f(y)),
// whose realized worst case is the "embed_bound" stage constant.
inline EmbeddingResult embed_compact(const FiniteMetricSpace& s, unsigned k,
                                     const BigRational& lambda,
                                     const EmbedOptions& opts = {}) {
  std::size_t n = s.size();
  if (n < 1) throw DegenerateInput("embedding needs at least 1 point");
  if (k < 2 || k > 10) throw InvalidParams("alphabet size must lie in [2,10]");
  if (lambda <= 0 || lambda >= 1) throw InvalidParams("lambda must lie in (0,1)");

  double diam = s.diameter();
  double factor = 1.0;
  FiniteMetricSpace work = s;
  if (diam > 1.0) {
    factor = 1.0 / diam;
    std::vector<double> flat = s.flat();
    // dividing by a constant is monotone even after rounding, so equalities
    // and the strong triangle inequality survive exactly
    for (double& v : flat) v /= diam;
    work = FiniteMetricSpace::checked(s.labels(), std::move(flat), s.is_metric());
  }

  Dendrogram den = build_dendrogram(work, opts.tol);
  std::size_t nn = den.nodes.size();
  std::vector<std::size_t> minleaf(nn, 0);
  std::vector<std::int64_t> lvl(nn, -1);
  detail::LevelQuantizer quant(lambda);
  for (std::size_t id = 0; id < nn; ++id) {
    const auto& node = den.nodes[id];
    if (node.leaf) {
      minleaf[id] = *node.leaf;
    } else {
      // children precede parents and are ordered by least leaf
      minleaf[id] = minleaf[node.children.front()];
      lvl[id] = quant.level(node.height);
    }
  }

  // contract nested clusters with equal levels; branches[g] lists the
  // effective children of each contracted cluster root g
  std::vector<std::vector<std::size_t>> branches(nn);
  std::size_t max_branch = 0;
  std::function<void(std::size_t, std::size_t)> absorb = [&](std::size_t g, std::size_t u) {
    for (std::size_t c : den.nodes[u].children) {
      if (!den.is_leaf(c) && lvl[c] == lvl[g]) absorb(g, c);
      else branches[g].push_back(c);
    }
  };
  std::function<void(std::size_t)> build_groups = [&](std::size_t g) {
    absorb(g, g);
    std::sort(branches[g].begin(), branches[g].end(),
              [&](std::size_t a, std::size_t b) { return minleaf[a] < minleaf[b]; });
    max_branch = std::max(max_branch, branches[g].size());
    for (std::size_t c : branches[g])
      if (!den.is_leaf(c)) build_groups(c);
  };
  if (!den.is_leaf(den.root)) build_groups(den.root);

  if (opts.mode == EmbedMode::ExactLevel && max_branch > k)
    throw AlphabetTooSmall(static_cast<unsigned>(max_branch));

  std::vector<Word> words(n);
  std::int64_t depth_needed = 0, worst_gap = 0;
  std::vector<std::uint32_t> prefix;
  std::function<void(std::size_t, std::int64_t)> assign = [&](std::size_t id,
                                                              std::int64_t min_pos) {
    if (den.is_leaf(id)) {
      words[*den.nodes[id].leaf].symbols = prefix;
      return;
    }
    std::int64_t j = lvl[id];
    std::size_t fan = branches[id].size();
    std::int64_t width = 1;
    if (opts.mode == EmbedMode::ExpandDepth) {
      std::size_t cap = k;
      while (cap < fan) {
        cap *= k;
        ++width;
      }
    }
    std::int64_t start = std::max(j, min_pos);
    depth_needed = std::max(depth_needed, start + width);
    worst_gap = std::max(worst_gap, start - j + width);
    prefix.resize(static_cast<std::size_t>(start), 0);
    for (std::size_t idx = 0; idx < fan; ++idx) {
      std::size_t rest = idx;
      std::vector<std::uint32_t> code(static_cast<std::size_t>(width), 0);
      for (std::size_t p = code.size(); p-- > 0;) {
        code[p] = static_cast<std::uint32_t>(rest % k);
        rest /= k;
      }
      prefix.insert(prefix.end(), code.begin(), code.end());
      assign(branches[id][idx], start + width);
      prefix.resize(static_cast<std::size_t>(start));
    }
  };
  assign(den.root, 0);

  std::size_t depth = static_cast<std::size_t>(std::max<std::int64_t>(depth_needed, 1));
  for (auto& w : words) w.symbols.resize(depth, 0);

  CantorSpace target;
  target.k = k;
  target.lambda = lambda;
  target.depth = depth;
  target.points = words;
  target.base = zero_word(depth);
  FiniteMetricSpace target_metric = materialize(target, CantorMetric::Rho);

  PointMap map{as_extended(work), as_extended(target_metric), {}};
  map.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) map.assignment[i] = i;
  DistortionReport report = full_distortion(map, 1e-9, opts.scan);

  EmbeddingResult out;
  out.target = std::move(target);
  out.assignment = std::move(words);
  out.target_metric = std::move(target_metric);
  out.report = std::move(report);
  out.stage_constants.emplace_back("scale", factor);
  out.stage_constants.emplace_back("embed", out.report.bilip->L);
  out.stage_constants.emplace_back("embed_bound",
                                   rational_to_double(rational_pow(lambda, -worst_gap)));
  if (opts.input_properties) out.input_properties = full_report(s);
  return out;
}

// Embeds an unbounded ultrametric space into a flattened symbolic Cantor set
// (F^m without the base word, sigma): chordal one-point extension at the
// given base point, compact embedding of the extension with the point at
// infinity carried along as an ordinary point, then a position-wise alphabet
// rotation (an isometry of rho) moving the image of infinity to the all-zero
// word, which becomes the base of the flattened metric.  With L the measured
// constant of the compact stage, the final map is L^3-bilipschitz, because
// sigma divides one rho distance by two rho distances to the base.
inline EmbeddingResult embed_unbounded(const FiniteMetricSpace& s, std::size_t a,
                                       unsigned k, const BigRational& lambda,
                                       const EmbedOptions& opts = {}) {
  std::size_t n = s.size();
  if (n < 1) throw DegenerateInput("embedding needs at least 1 point");
  if (a >= n) throw InvalidParams("base point index out of range");

  ExtendedSpace ext = chordal_extend(s, a);
  EmbedOptions inner_opts = opts;
  inner_opts.input_properties = false;
  EmbeddingResult inner = embed_compact(ext.space, k, lambda, inner_opts);

  const Word& winf = inner.assignment[n];
  auto rotate = [&](Word w) {
    for (std::size_t p = 0; p < w.symbols.size(); ++p) {
      if (w.symbols[p] == winf.symbols[p]) w.symbols[p] = 0;
      else if (w.symbols[p] == 0) w.symbols[p] = winf.symbols[p];
    }
    return w;
  };

  CantorSpace target;
  target.k = k;
  target.lambda = lambda;
  target.depth = inner.target.depth;
  target.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) target.points.push_back(rotate(inner.assignment[i]));
  target.base = zero_word(target.depth);
  FiniteMetricSpace target_metric = materialize(target, CantorMetric::Sigma);

  PointMap map{as_extended(s), as_extended(target_metric), {}};
  map.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) map.assignment[i] = i;
  DistortionReport report = full_distortion(map, 1e-9, opts.scan);

  EmbeddingResult out;
  out.assignment = target.points;
  out.target = std::move(target);
  out.target_metric = std::move(target_metric);
  out.report = std::move(report);
  out.stage_constants.emplace_back("chordal", 1.0);
  for (const auto& sc : inner.stage_constants) out.stage_constants.push_back(sc);
  out.stage_constants.emplace_back("rotate", 1.0);
  if (opts.input_properties) out.input_properties = full_report(s);
  return out;
}

enum class UniformizeMode { Bounded, Unbounded };

// Uniformization of a general metric space: replace the metric by its
// subdominant ultrametric (distortion recorded as the "ultrametrize" stage
// constant), then embed over a binary alphabet in ExpandDepth mode.  In
// Unbounded mode the chordal-extension route runs at the given base point and
// the result carries the flattened metric.  The report measures the whole
// pipeline from the input metric (scaled by the same factor as the embedding
// when one was applied).
inline EmbeddingResult uniformize(const FiniteMetricSpace& s, UniformizeMode mode,
                                  std::optional<std::size_t> base_point,
                                  const BigRational& lambda,
                                  const EmbedOptions& opts_in = {}) {
  s.require_metric();
  std::size_t n = s.size();
  if (n < 2) throw DegenerateInput("uniformization needs at least 2 points");

  FiniteMetricSpace ultra = subdominant_ultrametric(s);
  DistortionValue l1 = ultrametrization_distortion(s);

  EmbedOptions opts = opts_in;
  opts.mode = EmbedMode::ExpandDepth;
  opts.input_properties = false;

  EmbeddingResult inner;
  FiniteMetricSpace source = s;
  if (mode == UniformizeMode::Bounded) {
    inner = embed_compact(ultra, 2, lambda, opts);
    double du = ultra.diameter();
    if (du > 1.0) {  // mirror the embedding's scaling on the measured source
      std::vector<double> flat = s.flat();
      for (double& v : flat) v /= du;
      source = FiniteMetricSpace::checked(s.labels(), std::move(flat), s.is_metric());
    }
  } else {
    if (!base_point) throw InvalidParams("unbounded uniformization needs a base point");
    if (*base_point >= n) throw InvalidParams("base point index out of range");
    inner = embed_unbounded(ultra, *base_point, 2, lambda, opts);
  }

  PointMap map{as_extended(std::move(source)), as_extended(inner.target_metric), {}};
  map.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) map.assignment[i] = i;
  DistortionReport report = full_distortion(map, 1e-9, opts_in.scan);

  EmbeddingResult out = std::move(inner);
  out.report = std::move(report);
  out.stage_constants.insert(out.stage_constants.begin(),
                             std::make_pair(std::string("ultrametrize"), l1.value));
  if (opts_in.input_properties) out.input_properties = full_report(s);
  return out;
}

}  // namespace umt
