#pragma once

// Shared fixture builders for the test binaries.

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "umt/cantor.hpp"
#include "umt/deform.hpp"
#include "umt/distort.hpp"
#include "umt/metric_space.hpp"

namespace helpers {

inline umt::FiniteMetricSpace line(const std::vector<double>& pos) {
  std::size_t n = pos.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = std::abs(pos[i] - pos[j]);
  return umt::make_space(m);
}

inline umt::FiniteMetricSpace scaled(const umt::FiniteMetricSpace& s, double c) {
  std::vector<double> flat = s.flat();
  for (double& v : flat) v *= c;
  return umt::FiniteMetricSpace::checked(s.labels(), std::move(flat), s.is_metric());
}

inline umt::FiniteMetricSpace rho_space(unsigned k, std::size_t depth,
                                        const umt::BigRational& lambda) {
  umt::CantorSpace c;
  c.k = k;
  c.lambda = lambda;
  c.depth = depth;
  c.points = umt::enumerate_words(k, depth);
  c.base = umt::zero_word(depth);
  return umt::materialize(c, umt::CantorMetric::Rho);
}

// The identity correspondence between a space with an abstract point at
// infinity appended (distances to it deleted in cross ratios) and its chordal
// extension, where the same point carries honest chordal distances.
inline umt::PointMap chordal_identity_map(const umt::FiniteMetricSpace& s,
                                          std::size_t a) {
  std::size_t n = s.size();
  std::size_t m = n + 1;
  double pad = std::max(1.0, s.diameter());
  std::vector<double> flat(m * m, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) flat[x * m + y] = s.dist(x, y);
    flat[x * m + n] = flat[n * m + x] = pad;  // placeholder row, always deleted
  }
  std::vector<std::string> labels = s.labels();
  labels.push_back("inf");
  umt::PointMap map;
  map.source =
      umt::ExtendedSpace{umt::space_from_parts(std::move(labels), std::move(flat)), n};
  map.target = umt::chordal_extend(s, a);
  map.target.infinity.reset();  // chordal distances take part on this side
  map.assignment.resize(m);
  std::iota(map.assignment.begin(), map.assignment.end(), std::size_t{0});
  return map;
}

}  // namespace helpers
