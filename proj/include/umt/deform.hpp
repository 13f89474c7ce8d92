#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "umt/cantor.hpp"
#include "umt/errors.hpp"
#include "umt/metric_space.hpp"
#include "umt/props.hpp"

namespace umt {

namespace detail {

// Triangle-verify with tolerance scaled to the matrix magnitude, so the
// metric flag stays meaningful for strongly expanded outputs.
inline FiniteMetricSpace flagged_space(std::vector<std::string> labels,
                                       std::vector<double> flat) {
  double vmax = 1.0;
  for (double v : flat) vmax = std::max(vmax, v);
  return space_from_parts(std::move(labels), std::move(flat),
                          kDefaultConstructionTol * vmax);
}

}  // namespace detail

// Flattening at a base point o: d'(x,y) = d(x,y) / (d(x,o) d(y,o)) on the
// space with o removed.  Sends an ultrametric to an ultrametric (the strong
// triangle inequality for d' reduces to the ultrametric four-point products
// inequality for d); for other inputs the output may fail the triangle
// inequality and is flagged accordingly.
inline FiniteMetricSpace invert(const FiniteMetricSpace& s, std::size_t o) {
  std::size_t n = s.size();
  if (o >= n) throw InvalidParams("base point index out of range");
  if (n < 3) throw TooFewPoints("flattening needs at least 2 points besides the base");
  std::vector<std::string> labels;
  std::vector<std::size_t> keep;
  labels.reserve(n - 1);
  keep.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == o) continue;
    keep.push_back(i);
    labels.push_back(s.label(i));
  }
  std::size_t m = keep.size();
  std::vector<double> flat(m * m, 0.0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      std::size_t x = keep[a], y = keep[b];
      double v = s.dist(x, y) / (s.dist(x, o) * s.dist(y, o));
      flat[a * m + b] = flat[b * m + a] = v;
    }
  return detail::flagged_space(std::move(labels), std::move(flat));
}

// One-point extension by a point at infinity, normalized at a base point a:
//   d_a(x,y)   = d(x,y) / (max(1, d(x,a)) max(1, d(y,a)))
//   d_a(x,inf) = 1 / max(1, d(x,a)),   d_a(inf,inf) = 0.
// Sends an ultrametric to an ultrametric of diameter at most 1.  When the
// input already has diameter <= 1 the original distances are unchanged and
// every distance to infinity equals 1.  The new point is the last index.
inline ExtendedSpace chordal_extend(const FiniteMetricSpace& s, std::size_t a,
                                    std::string infinity_label = "inf") {
  std::size_t n = s.size();
  if (a >= n) throw InvalidParams("base point index out of range");
  std::vector<double> weight(n);
  for (std::size_t i = 0; i < n; ++i) weight[i] = std::max(1.0, s.dist(i, a));
  std::size_t m = n + 1;
  std::vector<double> flat(m * m, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      double v = s.dist(x, y) / (weight[x] * weight[y]);
      flat[x * m + y] = flat[y * m + x] = v;
    }
    flat[x * m + n] = flat[n * m + x] = 1.0 / weight[x];
  }
  std::vector<std::string> labels = s.labels();
  labels.push_back(std::move(infinity_label));
  return ExtendedSpace{detail::flagged_space(std::move(labels), std::move(flat)), n};
}

// Sphericalization at a point p: s_p(x,y) = d(x,y) / ((1+d(x,p))(1+d(y,p))).
// Every point is kept and the output has diameter at most 1, but unlike the
// chordal extension this deformation does not preserve the strong triangle
// inequality; see find_sphericalization_counterexample.
inline FiniteMetricSpace sphericalize(const FiniteMetricSpace& s, std::size_t p) {
  std::size_t n = s.size();
  if (p >= n) throw InvalidParams("base point index out of range");
  std::vector<double> weight(n);
  for (std::size_t i = 0; i < n; ++i) weight[i] = 1.0 + s.dist(i, p);
  std::vector<double> flat(n * n, 0.0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) {
      double v = s.dist(x, y) / (weight[x] * weight[y]);
      flat[x * n + y] = flat[y * n + x] = v;
    }
  return detail::flagged_space(s.labels(), std::move(flat));
}

// A strong-triangle violation in a deformed space:
// lhs = d(x,y) exceeds rhs = max(d(x,z), d(z,y)).
struct DeformationWitness {
  TripleWitness triple;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct SphericalizationCounterexample {
  FiniteMetricSpace space;     // an ultrametric input
  std::size_t center = 0;      // the sphericalization base point
  FiniteMetricSpace deformed;  // its sphericalization, not ultrametric
  DeformationWitness witness;  // worst violating triple in the deformed space
  double margin = 0.0;         // lhs/rhs - 1 at the witness
};

// Searches for an ultrametric space whose sphericalization violates the
// strong triangle inequality.  A deterministic grid of three-point spaces
// with half-power distances runs first, then seeded random spaces of up to
// max_n points sampled from symbolic Cantor sets.  Each candidate space costs
// one unit of budget; throws NotFound when the budget is exhausted.
inline SphericalizationCounterexample find_sphericalization_counterexample(
    std::size_t max_n = 16, std::uint64_t seed = 0, std::size_t budget = 10'000) {
  if (max_n < 3) throw InvalidParams("a counterexample needs at least 3 points");
  constexpr double kMinMargin = 1e-9;

  auto examine = [&](FiniteMetricSpace space, std::size_t p)
      -> std::optional<SphericalizationCounterexample> {
    FiniteMetricSpace sp = sphericalize(space, p);
    UltrametricityResult u = check_ultrametric(sp, 0.0);
    if (!u.witness || u.max_ratio <= 1.0 + kMinMargin) return std::nullopt;
    const TripleWitness& t = *u.witness;
    double lhs = sp.dist(t.x, t.y);
    double rhs = std::max(sp.dist(t.x, t.z), sp.dist(t.z, t.y));
    return SphericalizationCounterexample{std::move(space), p, std::move(sp),
                                          DeformationWitness{t, lhs, rhs},
                                          u.max_ratio - 1.0};
  };

  // grid phase: d(p,x) = 2^-i, d(p,y) = 2^-j, d(x,y) = max of the two
  for (int i = -6; i <= 6; ++i)
    for (int j = -6; j <= 6; ++j) {
      if (budget == 0)
        throw NotFound("sphericalization counterexample budget exhausted");
      --budget;
      double a = std::ldexp(1.0, -i);
      double b = std::ldexp(1.0, -j);
      double c = std::max(a, b);
      auto space = make_space({{0, a, b}, {a, 0, c}, {b, c, 0}});
      if (auto found = examine(std::move(space), 0)) return *found;
    }

  // random phase: scaled word metrics over a binary alphabet
  std::mt19937_64 eng(seed);
  auto draw = [&](std::size_t bound) { return static_cast<std::size_t>(eng() % bound); };
  constexpr std::size_t kDepth = 10;
  while (budget > 0) {
    --budget;
    std::size_t n = 3 + draw(max_n - 2);
    std::vector<Word> pts;
    std::size_t attempts = 0;
    while (pts.size() < n && attempts < 64 * n) {
      ++attempts;
      Word w;
      w.symbols.reserve(kDepth);
      for (std::size_t d = 0; d < kDepth; ++d)
        w.symbols.push_back(static_cast<std::uint32_t>(draw(2)));
      if (std::find(pts.begin(), pts.end(), w) == pts.end()) pts.push_back(std::move(w));
    }
    if (pts.size() < n) continue;
    double scale = std::ldexp(1.0, static_cast<int>(draw(9)) - 4);
    std::vector<double> flat(n * n, 0.0);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y) {
        ExpInt l = common_prefix_length(pts[x], pts[y]);
        double v = scale * std::ldexp(1.0, -static_cast<int>(l.value));
        flat[x * n + y] = flat[y * n + x] = v;
      }
    auto space = FiniteMetricSpace::checked(default_labels(n), std::move(flat), true);
    if (auto found = examine(std::move(space), draw(n))) return *found;
  }
  throw NotFound("sphericalization counterexample budget exhausted");
}

}  // namespace umt
