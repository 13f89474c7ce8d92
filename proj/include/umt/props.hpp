#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "umt/errors.hpp"
#include "umt/metric_space.hpp"
#include "umt/minimax.hpp"

namespace umt {

struct TripleWitness {
  std::size_t x = 0, y = 0, z = 0;
};

struct UltrametricityResult {
  bool is_ultrametric = true;
  // worst ratio d(x,y) / max(d(x,z), d(z,y)) over all triples; > 1 means the
  // strong triangle inequality fails somewhere
  double max_ratio = 1.0;
  std::optional<TripleWitness> witness;
};

// Verifies d(x,y) <= max(d(x,z), d(z,y)) for all triples, up to a relative
// tolerance.  Accepts unvalidated quasimetrics (it is a diagnostic).
inline UltrametricityResult check_ultrametric(const FiniteMetricSpace& s,
                                              double tol = 1e-12) {
  std::size_t n = s.size();
  UltrametricityResult r;
  double worst = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) {
      double dxy = s.dist(x, y);
      for (std::size_t z = 0; z < n; ++z) {
        if (z == x || z == y) continue;
        double rhs = std::max(s.dist(x, z), s.dist(z, y));
        if (rhs <= 0.0) continue;
        double ratio = dxy / rhs;
        if (ratio > worst) {
          worst = ratio;
          r.witness = TripleWitness{x, y, z};
        }
      }
    }
  if (r.witness) r.max_ratio = worst;
  r.is_ultrametric = r.max_ratio <= 1.0 + tol;
  return r;
}

// Distinct pairwise distances plus the geometric midpoints of consecutive
// distinct distances: the radius breakpoints used by the ball-based scans.
inline std::vector<double> scan_radii(const FiniteMetricSpace& s) {
  std::vector<double> d;
  std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d.push_back(s.dist(i, j));
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  std::vector<double> out;
  out.reserve(2 * d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    out.push_back(d[i]);
    if (i + 1 < d.size()) out.push_back(std::sqrt(d[i] * d[i + 1]));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

enum class CoverMode { Exact, Greedy };

struct DoublingResult {
  unsigned N = 1;
  CoverMode method = CoverMode::Greedy;
  std::size_t center = 0;  // witness ball
  double radius = 0.0;
};

namespace detail {

// Minimum set cover by bitmask DP; universe <= 12 elements guaranteed.
inline unsigned exact_cover(const std::vector<std::uint32_t>& sets, unsigned universe_bits) {
  std::uint32_t full = universe_bits >= 32 ? ~0u : ((1u << universe_bits) - 1);
  std::vector<unsigned> dp(full + 1u, ~0u);
  dp[0] = 0;
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    if (dp[mask] == ~0u) continue;
    if (mask == full) break;
    std::uint32_t missing = full & ~mask;
    std::uint32_t low = missing & (~missing + 1);  // lowest uncovered element
    for (std::uint32_t set : sets) {
      if (!(set & low)) continue;
      std::uint32_t next = mask | set;
      if (dp[next] > dp[mask] + 1) dp[next] = dp[mask] + 1;
    }
  }
  return dp[full];
}

}  // namespace detail

// Smallest N such that every scanned ball B(x,r) is covered by N balls of
// radius r/2 centered at points of the space.  Balls are closed.  The scan
// runs r over the distance values of x's own row: between consecutive row
// values the ball is unchanged while the half-radius grows, so the cover
// count there is dominated by the left endpoint and radii from the shared
// breakpoint set that lie strictly inside such an interval cannot raise N.
inline DoublingResult doubling_constant(const FiniteMetricSpace& s,
                                        CoverMode mode = CoverMode::Greedy) {
  std::size_t n = s.size();
  DoublingResult result;
  result.method = mode;
  if (n <= 1) return result;

  std::vector<std::size_t> ball, half;
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<double> row;
    row.reserve(n - 1);
    for (std::size_t y = 0; y < n; ++y)
      if (y != x) row.push_back(s.dist(x, y));
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());

    for (double r : row) {
      ball.clear();
      for (std::size_t y = 0; y < n; ++y)
        if (s.dist(x, y) <= r) ball.push_back(y);
      unsigned count = 0;
      if (mode == CoverMode::Exact) {
        if (ball.size() > 12) throw ExactSearchTooLarge(ball.size());
        std::vector<std::uint32_t> sets;
        sets.reserve(n);
        for (std::size_t c = 0; c < n; ++c) {
          std::uint32_t m = 0;
          for (std::size_t b = 0; b < ball.size(); ++b)
            if (s.dist(c, ball[b]) <= r / 2) m |= 1u << b;
          if (m) sets.push_back(m);
        }
        count = detail::exact_cover(sets, static_cast<unsigned>(ball.size()));
      } else {
        std::vector<bool> covered(ball.size(), false);
        std::size_t left = ball.size();
        while (left > 0) {
          std::size_t best_c = n;
          std::size_t best_gain = 0;
          for (std::size_t c = 0; c < n; ++c) {
            std::size_t gain = 0;
            for (std::size_t b = 0; b < ball.size(); ++b)
              if (!covered[b] && s.dist(c, ball[b]) <= r / 2) ++gain;
            if (gain > best_gain) {
              best_gain = gain;
              best_c = c;
            }
          }
          for (std::size_t b = 0; b < ball.size(); ++b)
            if (!covered[b] && s.dist(best_c, ball[b]) <= r / 2) {
              covered[b] = true;
              --left;
            }
          ++count;
        }
      }
      if (count > result.N) {
        result.N = count;
        result.center = x;
        result.radius = r;
      }
    }
  }
  return result;
}

struct PerfectnessResult {
  double C = 1.0;
  std::size_t center = 0;  // witness (x, r)
  double radius = 0.0;
  bool vacuous = true;     // no (x, r) constrained the constant
};

// Smallest C >= 1 such that every scanned annulus B(x,r) \ B(x,r/C) is
// nonempty whenever the complement of B(x,r) is nonempty.  Radii are scanned
// per center from its nearest-neighbor distance upward: a finite sample says
// nothing about perfectness below the local resolution, and without that
// floor every finite space would report +infinity.
inline PerfectnessResult uniform_perfectness_constant(const FiniteMetricSpace& s) {
  std::size_t n = s.size();
  PerfectnessResult result;
  if (n <= 1) return result;
  std::vector<double> radii = scan_radii(s);
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<double> row;
    row.reserve(n - 1);
    for (std::size_t y = 0; y < n; ++y)
      if (y != x) row.push_back(s.dist(x, y));
    std::sort(row.begin(), row.end());
    double local_min = row.front(), local_max = row.back();
    for (double r : radii) {
      if (r < local_min) continue;
      if (r >= local_max) break;  // complement of B(x,r) empty: vacuous
      // largest distance from x inside the ball
      auto it = std::upper_bound(row.begin(), row.end(), r);
      double reach = *(it - 1);
      double need = r / reach;
      if (result.vacuous || need > result.C) {
        result.C = need;
        result.center = x;
        result.radius = r;
        result.vacuous = false;
      }
    }
  }
  if (result.C < 1.0) result.C = 1.0;
  return result;
}

struct ChainResult {
  double modulus = 1.0;            // in (0, 1]
  std::vector<std::size_t> chain;  // a chain attaining it, empty for n < 3
};

// Uniform-disconnectedness modulus: the minimum over pairs (s,t) and simple
// chains with at least one intermediate point of (max step)/d(s,t).  A chain
// from s to t never uses the edge {s,t}, so the minimax value is the
// bottleneck of the complete graph with that edge removed; it comes from the
// minimum spanning tree, rebuilt without the edge for pairs adjacent in it.
inline ChainResult disconnectedness_modulus(const FiniteMetricSpace& s) {
  std::size_t n = s.size();
  if (n < 3) return ChainResult{};
  SpanningTree mst = minimum_spanning_tree(s);
  std::vector<double> bottleneck = tree_path_maxima(s, mst);

  ChainResult result;
  bool first = true;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      std::vector<std::size_t> path = tree_path(mst, a, b);
      double value;
      std::vector<std::size_t>* chain = &path;
      std::vector<std::size_t> alt;
      if (path.size() == 2) {  // direct tree edge: recompute without it
        SpanningTree reduced = minimum_spanning_tree(s, a, b);
        alt = tree_path(reduced, a, b);
        value = 0;
        for (std::size_t i = 0; i + 1 < alt.size(); ++i)
          value = std::max(value, s.dist(alt[i], alt[i + 1]));
        chain = &alt;
      } else {
        value = bottleneck[a * n + b];
      }
      double ratio = value / s.dist(a, b);
      if (first || ratio < result.modulus) {
        result.modulus = ratio;
        result.chain = *chain;
        first = false;
      }
    }
  return result;
}

struct PropertyReport {
  UltrametricityResult ultrametric;
  DoublingResult doubling;
  PerfectnessResult perfectness;
  ChainResult chain;
};

inline PropertyReport full_report(const FiniteMetricSpace& s,
                                  CoverMode doubling_mode = CoverMode::Greedy,
                                  double tol = 1e-12) {
  return PropertyReport{check_ultrametric(s, tol), doubling_constant(s, doubling_mode),
                        uniform_perfectness_constant(s), disconnectedness_modulus(s)};
}

}  // namespace umt
