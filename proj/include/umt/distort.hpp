#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "umt/errors.hpp"
#include "umt/metric_space.hpp"
#include "umt/props.hpp"

namespace umt {

// A bijection between the points of two (possibly extended) spaces.
struct PointMap {
  ExtendedSpace source;
  ExtendedSpace target;
  std::vector<std::size_t> assignment;  // source index -> target index

  void validate() const {
    std::size_t n = source.size();
    if (target.size() != n || assignment.size() != n)
      throw InvalidParams("point map must be a bijection between equal-size spaces");
    std::vector<bool> hit(n, false);
    for (std::size_t i : assignment) {
      if (i >= n || hit[i]) throw InvalidParams("point map assignment is not a bijection");
      hit[i] = true;
    }
  }

  // true when i is at infinity on either side of the map
  bool touches_infinity(std::size_t i) const {
    return source.is_infinity(i) ||
           (target.infinity && assignment[i] == *target.infinity);
  }
};

struct PairWitness {
  std::size_t a = 0, b = 0;
};

struct BilipschitzResult {
  double L = 1.0;
  PairWitness worst;
};

// L = max over pairs of max(ratio, 1/ratio) with ratio = d2(fx,fy)/d1(x,y).
// Points at infinity are left out of the pair scan.
inline BilipschitzResult bilipschitz_of_map(const PointMap& m) {
  m.validate();
  std::size_t n = m.source.size();
  BilipschitzResult out;
  for (std::size_t x = 0; x < n; ++x) {
    if (m.touches_infinity(x)) continue;
    for (std::size_t y = x + 1; y < n; ++y) {
      if (m.touches_infinity(y)) continue;
      double r = m.target.space.dist(m.assignment[x], m.assignment[y]) /
                 m.source.space.dist(x, y);
      double l = std::max(r, 1.0 / r);
      if (l > out.L) {
        out.L = l;
        out.worst = PairWitness{x, y};
      }
    }
  }
  return out;
}

struct StepPoint {
  double in_ratio = 0.0, out_ratio = 0.0;
};

struct QsResult {
  double H = 1.0;
  TripleWitness worst;
  // monotone majorant of the step data: out-ratio running maxima by in-ratio
  std::vector<StepPoint> envelope;
  std::vector<StepPoint> steps;  // full data, only when requested
};

struct ScanOptions {
  std::size_t max_exact_n = 60;     // quadruple scans beyond this need force
  bool force = false;
  std::size_t sample_quads = 1'000'000;
  std::uint64_t seed = 0;
  bool collect_steps = false;
};

// Weak quasisymmetry constant: H = max over ordered triples of distinct
// points with d1(x,z) <= d1(x,y) of d2(fx,fz)/d2(fx,fy), floored at 1.
// Points at infinity are excluded.  The emitted (in-ratio, out-ratio) data
// gives a monotone majorant eta with eta(1) = H.
inline QsResult weak_qs_constant(const PointMap& m, const ScanOptions& opts = {}) {
  m.validate();
  std::size_t n = m.source.size();
  QsResult out;
  std::vector<StepPoint> steps;
  double best = 0.0;
  bool have = false;
  for (std::size_t x = 0; x < n; ++x) {
    if (m.touches_infinity(x)) continue;
    for (std::size_t y = 0; y < n; ++y) {
      if (y == x || m.touches_infinity(y)) continue;
      double dxy = m.source.space.dist(x, y);
      double exy = m.target.space.dist(m.assignment[x], m.assignment[y]);
      for (std::size_t z = 0; z < n; ++z) {
        if (z == x || z == y || m.touches_infinity(z)) continue;
        double dxz = m.source.space.dist(x, z);
        if (dxz > dxy) continue;
        double r = m.target.space.dist(m.assignment[x], m.assignment[z]) / exy;
        steps.push_back(StepPoint{dxz / dxy, r});
        if (!have || r > best) {
          best = r;
          out.worst = TripleWitness{x, y, z};
          have = true;
        }
      }
    }
  }
  if (have) out.H = std::max(1.0, best);
  std::sort(steps.begin(), steps.end(), [](const StepPoint& a, const StepPoint& b) {
    return a.in_ratio < b.in_ratio || (a.in_ratio == b.in_ratio && a.out_ratio < b.out_ratio);
  });
  double running = 0.0;
  for (const auto& p : steps) {
    if (p.out_ratio > running) {
      running = p.out_ratio;
      if (!out.envelope.empty() && out.envelope.back().in_ratio == p.in_ratio)
        out.envelope.back().out_ratio = running;
      else
        out.envelope.push_back(StepPoint{p.in_ratio, running});
    }
  }
  if (opts.collect_steps) out.steps = std::move(steps);
  return out;
}

struct QuadWitness {
  std::size_t x = 0, y = 0, z = 0, w = 0;
};

struct QmResult {
  double K = 1.0;
  QuadWitness worst;
  bool lower_bound_only = false;  // set when the scan was subsampled
  // (source cross ratio, image cross ratio) majorant, as in QsResult
  std::vector<StepPoint> envelope;
  std::vector<StepPoint> steps;  // full data, only when requested
};

struct MobiusResult {
  bool mobius = true;
  double max_rel_dev = 0.0;
  QuadWitness worst;
};

namespace detail {

// The three pairing products of a quadruple, with distances to a point at
// infinity deleted: P1 = d(x,y)d(z,w), P2 = d(x,z)d(y,w), P3 = d(x,w)d(y,z).
// Every cross ratio of the quadruple's 24 orderings is a quotient Pa/Pb, and
// the ordering realizing it with the sorted-first element in front is the
// lexicographically least of its class.
struct PairingScan {
  const FiniteMetricSpace* space;
  std::optional<std::size_t> inf;

  std::array<double, 3> operator()(std::size_t x, std::size_t y, std::size_t z,
                                   std::size_t w) const {
    auto f = [&](std::size_t a, std::size_t b) {
      if (inf && (*inf == a || *inf == b)) return 1.0;
      return space->dist(a, b);
    };
    return {f(x, y) * f(z, w), f(x, z) * f(y, w), f(x, w) * f(y, z)};
  }
};

// ordering of the sorted quadruple (x,y,z,w) whose cross ratio is Pa/Pb
inline QuadWitness ordering_for(std::size_t a, std::size_t b, std::size_t x,
                                std::size_t y, std::size_t z, std::size_t w) {
  auto pick = [&](int i) { return i == 0 ? x : i == 1 ? y : i == 2 ? z : w; };
  static constexpr int table[3][3][4] = {
      // numerator P1        P2            P3
      {{0, 0, 0, 0}, {0, 1, 2, 3}, {0, 1, 3, 2}},  // denominator P1
      {{0, 2, 1, 3}, {0, 0, 0, 0}, {0, 2, 3, 1}},  // denominator P2
      {{0, 3, 1, 2}, {0, 3, 2, 1}, {0, 0, 0, 0}},  // denominator P3
  };
  const int* t = table[b][a];
  return QuadWitness{static_cast<std::size_t>(pick(t[0])), static_cast<std::size_t>(pick(t[1])),
                     static_cast<std::size_t>(pick(t[2])), static_cast<std::size_t>(pick(t[3]))};
}

inline bool witness_less(const QuadWitness& p, const QuadWitness& q) {
  return std::array<std::size_t, 4>{p.x, p.y, p.z, p.w} <
         std::array<std::size_t, 4>{q.x, q.y, q.z, q.w};
}

template <typename Visit>
inline void for_each_quad(std::size_t n, const ScanOptions& opts, bool* sampled,
                          Visit&& visit) {
  if (n <= opts.max_exact_n) {
    if (sampled) *sampled = false;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y)
        for (std::size_t z = y + 1; z < n; ++z)
          for (std::size_t w = z + 1; w < n; ++w) visit(x, y, z, w);
    return;
  }
  if (!opts.force) throw ScanTooLarge(n);
  if (sampled) *sampled = true;
  std::mt19937_64 eng(opts.seed);
  auto draw = [&](std::size_t bound) { return static_cast<std::size_t>(eng() % bound); };
  for (std::size_t it = 0; it < opts.sample_quads; ++it) {
    std::array<std::size_t, 4> q;
    for (int i = 0; i < 4;) {
      std::size_t c = draw(n);
      bool dup = false;
      for (int j = 0; j < i; ++j) dup |= q[j] == c;
      if (!dup) q[i++] = c;
    }
    std::sort(q.begin(), q.end());
    visit(q[0], q[1], q[2], q[3]);
  }
}

}  // namespace detail

// Weak quasimoebius constant: K = max over ordered quadruples of distinct
// points with source cross ratio <= 1 of the image cross ratio, floored at 1.
// Points at infinity take part through the deletion rule on each side.  The
// emitted step data gives a monotone majorant eta with eta(1) = K.
inline QmResult weak_qm_constant(const PointMap& m, const ScanOptions& opts = {}) {
  m.validate();
  std::size_t n = m.source.size();
  if (n < 4) throw DegenerateInput("quasimoebius scan needs at least 4 points");
  detail::PairingScan src{&m.source.space, m.source.infinity};
  detail::PairingScan tgt{&m.target.space, m.target.infinity};
  QmResult out;
  std::vector<StepPoint> steps;
  double best = 0.0;
  bool have = false;
  detail::for_each_quad(n, opts, &out.lower_bound_only, [&](std::size_t x, std::size_t y,
                                                           std::size_t z, std::size_t w) {
    auto S = src(x, y, z, w);
    auto T = tgt(m.assignment[x], m.assignment[y], m.assignment[z], m.assignment[w]);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) {
        if (a == b || S[a] > S[b]) continue;  // source ratio must be <= 1
        double r = T[a] / T[b];
        steps.push_back(StepPoint{S[a] / S[b], r});
        if (!have || r > best ||
            (r == best &&
             detail::witness_less(detail::ordering_for(a, b, x, y, z, w), out.worst))) {
          best = r;
          out.worst = detail::ordering_for(a, b, x, y, z, w);
          have = true;
        }
      }
  });
  if (have) out.K = std::max(1.0, best);
  std::sort(steps.begin(), steps.end(), [](const StepPoint& a, const StepPoint& b) {
    return a.in_ratio < b.in_ratio || (a.in_ratio == b.in_ratio && a.out_ratio < b.out_ratio);
  });
  double running = 0.0;
  for (const auto& p : steps) {
    if (p.out_ratio > running) {
      running = p.out_ratio;
      if (!out.envelope.empty() && out.envelope.back().in_ratio == p.in_ratio)
        out.envelope.back().out_ratio = running;
      else
        out.envelope.push_back(StepPoint{p.in_ratio, running});
    }
  }
  if (opts.collect_steps) out.steps = std::move(steps);
  return out;
}

// Checks whether the map preserves every cross ratio within a relative
// tolerance; reports the worst deviation and the quadruple attaining it.
inline MobiusResult is_mobius(const PointMap& m, double tol = 1e-9,
                              const ScanOptions& opts = {}) {
  m.validate();
  std::size_t n = m.source.size();
  if (n < 4) throw DegenerateInput("moebius check needs at least 4 points");
  detail::PairingScan src{&m.source.space, m.source.infinity};
  detail::PairingScan tgt{&m.target.space, m.target.infinity};
  MobiusResult out;
  bool sampled = false;
  bool have = false;
  detail::for_each_quad(n, opts, &sampled, [&](std::size_t x, std::size_t y, std::size_t z,
                                               std::size_t w) {
    auto S = src(x, y, z, w);
    auto T = tgt(m.assignment[x], m.assignment[y], m.assignment[z], m.assignment[w]);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) {
        if (a == b) continue;
        double rs = S[a] / S[b];
        double rt = T[a] / T[b];
        double dev = std::abs(rt - rs) / rs;
        if (!have || dev > out.max_rel_dev ||
            (dev == out.max_rel_dev &&
             detail::witness_less(detail::ordering_for(a, b, x, y, z, w), out.worst))) {
          out.max_rel_dev = dev;
          out.worst = detail::ordering_for(a, b, x, y, z, w);
          have = true;
        }
      }
  });
  out.mobius = out.max_rel_dev <= tol;
  return out;
}

struct DistortionReport {
  std::optional<BilipschitzResult> bilip;
  std::optional<QsResult> qs;
  std::optional<QmResult> qm;
  std::optional<MobiusResult> mobius;
};

inline DistortionReport full_distortion(const PointMap& m, double mobius_tol = 1e-9,
                                        const ScanOptions& opts = {}) {
  DistortionReport r;
  r.bilip = bilipschitz_of_map(m);
  r.qs = weak_qs_constant(m, opts);
  if (m.source.size() >= 4) {
    r.qm = weak_qm_constant(m, opts);
    r.mobius = is_mobius(m, mobius_tol, opts);
  }
  return r;
}

}  // namespace umt
