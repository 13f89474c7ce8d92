#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "umt/errors.hpp"

namespace umt {

inline constexpr double kDefaultConstructionTol = 1e-9;  // absolute

// A finite metric space: distinct labels and a symmetric positive distance
// matrix with zero diagonal.  `make_space` additionally verifies the triangle
// inequality; spaces produced by unvalidated deformations carry
// is_metric() == false and are rejected by operations that need a real metric.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;

  static FiniteMetricSpace checked(std::vector<std::string> labels,
                                   std::vector<double> dist, bool is_metric) {
    FiniteMetricSpace s;
    s.labels_ = std::move(labels);
    s.dist_ = std::move(dist);
    s.is_metric_ = is_metric;
    s.validate_basic();
    return s;
  }

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool is_metric() const { return is_metric_; }

  double dist(std::size_t i, std::size_t j) const {
    return dist_[i * size() + j];
  }
  const std::vector<double>& flat() const { return dist_; }

  double diameter() const {
    double m = 0;
    for (double v : dist_) m = std::max(m, v);
    return m;
  }

  std::optional<std::size_t> find_label(const std::string& l) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == l) return i;
    return std::nullopt;
  }

  void require_metric() const {
    if (!is_metric_) throw QuasiMetricInput();
  }

 private:
  // symmetry, zero diagonal, positivity, distinct labels
  void validate_basic() const {
    std::size_t n = labels_.size();
    if (dist_.size() != n * n)
      throw InvalidParams("distance matrix size does not match label count");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (labels_[i] == labels_[j]) throw DuplicateLabels(labels_[i]);
    for (std::size_t i = 0; i < n; ++i) {
      if (dist(i, i) != 0.0) throw NegativeDistance(i, i);
      for (std::size_t j = i + 1; j < n; ++j) {
        double v = dist(i, j);
        if (std::isnan(v) || v < 0.0) throw NegativeDistance(i, j);
        if (v != dist(j, i)) throw AsymmetricMatrix(i, j);
        if (v == 0.0) throw DuplicatePoints(i, j);
      }
    }
  }

  std::vector<std::string> labels_;
  std::vector<double> dist_;  // n*n row-major
  bool is_metric_ = false;
};

inline std::vector<double> flatten_matrix(const std::vector<std::vector<double>>& m) {
  std::vector<double> flat;
  flat.reserve(m.size() * m.size());
  for (const auto& row : m) {
    if (row.size() != m.size())
      throw InvalidParams("distance matrix is not square");
    for (double v : row) flat.push_back(v);
  }
  return flat;
}

inline std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = "p" + std::to_string(i);
  return labels;
}

// Validating constructor: throws AsymmetricMatrix / NegativeDistance /
// TriangleViolation (witness = (i,j,k) with d(i,k) > d(i,j)+d(j,k)+tol).
inline FiniteMetricSpace make_space(const std::vector<std::vector<double>>& dist,
                                    std::vector<std::string> labels = {},
                                    double tol = kDefaultConstructionTol) {
  std::size_t n = dist.size();
  if (labels.empty()) labels = default_labels(n);
  auto space =
      FiniteMetricSpace::checked(std::move(labels), flatten_matrix(dist), true);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (space.dist(i, k) > space.dist(i, j) + space.dist(j, k) + tol)
          throw TriangleViolation(i, j, k);
      }
    }
  return space;
}

// Rebuilds a space from parts, verifying the triangle inequality but flagging
// instead of throwing when it fails.  Used by deformations whose output is a
// metric only for some inputs.
inline FiniteMetricSpace space_from_parts(std::vector<std::string> labels,
                                          std::vector<double> flat,
                                          double tol = kDefaultConstructionTol) {
  std::size_t n = labels.size();
  bool metric = true;
  for (std::size_t i = 0; i < n && metric; ++i)
    for (std::size_t j = 0; j < n && metric; ++j) {
      if (j == i) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (flat[i * n + k] > flat[i * n + j] + flat[j * n + k] + tol) {
          metric = false;
          break;
        }
      }
    }
  return FiniteMetricSpace::checked(std::move(labels), std::move(flat), metric);
}

// A space with an optional distinguished point at infinity.  The point is an
// ordinary row of the matrix; it is special only in the cross ratio, where
// distances to it are deleted from the formula.
struct ExtendedSpace {
  FiniteMetricSpace space;
  std::optional<std::size_t> infinity;

  std::size_t size() const { return space.size(); }
  bool is_infinity(std::size_t i) const { return infinity && *infinity == i; }
};

inline ExtendedSpace as_extended(FiniteMetricSpace s) {
  return ExtendedSpace{std::move(s), std::nullopt};
}

// r(x,y,z,w) = d(x,z) d(y,w) / (d(x,y) d(z,w)); factors involving the point
// at infinity are deleted, e.g. r(x,y,z,inf) = d(x,z)/d(x,y).
inline double cross_ratio(const ExtendedSpace& e, std::size_t x, std::size_t y,
                          std::size_t z, std::size_t w) {
  std::array<std::size_t, 4> q{x, y, z, w};
  for (std::size_t a = 0; a < 4; ++a) {
    if (q[a] >= e.size()) throw InvalidParams("cross ratio index out of range");
    for (std::size_t b = a + 1; b < 4; ++b)
      if (q[a] == q[b]) throw DuplicatePoints(q[a], q[b]);
  }
  auto factor = [&](std::size_t a, std::size_t b) -> double {
    if (e.is_infinity(a) || e.is_infinity(b)) return 1.0;  // deletion rule
    return e.space.dist(a, b);
  };
  double den = factor(x, y) * factor(z, w);
  if (den == 0.0) throw ZeroDenominator();
  return factor(x, z) * factor(y, w) / den;
}

inline double cross_ratio(const FiniteMetricSpace& s, std::size_t x, std::size_t y,
                          std::size_t z, std::size_t w) {
  return cross_ratio(ExtendedSpace{s, std::nullopt}, x, y, z, w);
}

}  // namespace umt
