#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace umt {

// Base for all domain errors.  CLI maps these to exit code 1 with a
// machine-readable JSON body; `type()` is the stable identifier.
class Error : public std::runtime_error {
 public:
  Error(std::string type, const std::string& what)
      : std::runtime_error(what), type_(std::move(type)) {}
  const std::string& type() const { return type_; }

 private:
  std::string type_;
};

struct AsymmetricMatrix : Error {
  std::size_t i, j;
  AsymmetricMatrix(std::size_t i_, std::size_t j_)
      : Error("AsymmetricMatrix",
              "distance matrix is not symmetric at (" + std::to_string(i_) +
                  "," + std::to_string(j_) + ")"),
        i(i_), j(j_) {}
};

struct NegativeDistance : Error {
  std::size_t i, j;
  NegativeDistance(std::size_t i_, std::size_t j_)
      : Error("NegativeDistance",
              "distance entry (" + std::to_string(i_) + "," +
                  std::to_string(j_) + ") is negative or not a number"),
        i(i_), j(j_) {}
};

struct TriangleViolation : Error {
  std::size_t i, j, k;  // d(i,k) > d(i,j) + d(j,k) + tol
  TriangleViolation(std::size_t i_, std::size_t j_, std::size_t k_)
      : Error("TriangleViolation",
              "triangle inequality fails on (" + std::to_string(i_) + "," +
                  std::to_string(j_) + "," + std::to_string(k_) + ")"),
        i(i_), j(j_), k(k_) {}
};

struct DuplicatePoints : Error {
  std::size_t i, j;
  DuplicatePoints(std::size_t i_, std::size_t j_)
      : Error("DuplicatePoints",
              "points " + std::to_string(i_) + " and " + std::to_string(j_) +
                  " coincide"),
        i(i_), j(j_) {}
};

struct DuplicateLabels : Error {
  std::string label;
  explicit DuplicateLabels(std::string l)
      : Error("DuplicateLabels", "label \"" + l + "\" appears twice"),
        label(std::move(l)) {}
};

struct ZeroDenominator : Error {
  ZeroDenominator() : Error("ZeroDenominator", "cross ratio denominator is zero") {}
};

struct DepthMismatch : Error {
  std::size_t got, expected;
  DepthMismatch(std::size_t got_, std::size_t expected_)
      : Error("DepthMismatch",
              "word depth " + std::to_string(got_) + " does not match " +
                  std::to_string(expected_)),
        got(got_), expected(expected_) {}
};

struct BasePointArgument : Error {
  BasePointArgument()
      : Error("BasePointArgument",
              "flattened distance is undefined when an argument equals the base point") {}
};

struct BaseIncluded : Error {
  std::size_t index;
  explicit BaseIncluded(std::size_t idx)
      : Error("BaseIncluded",
              "point " + std::to_string(idx) +
                  " equals the base point; it must be excluded for this metric"),
        index(idx) {}
};

struct SizeLimitExceeded : Error {
  explicit SizeLimitExceeded(const std::string& what)
      : Error("SizeLimitExceeded", what) {}
};

struct TooFewPoints : Error {
  explicit TooFewPoints(const std::string& what) : Error("TooFewPoints", what) {}
};

struct ExactSearchTooLarge : Error {
  std::size_t ball_size;
  explicit ExactSearchTooLarge(std::size_t n)
      : Error("ExactSearchTooLarge",
              "exact cover search needs a ball with at most 12 points, got " +
                  std::to_string(n)),
        ball_size(n) {}
};

struct NotUltrametric : Error {
  std::size_t x, y, z;  // d(x,y) > max(d(x,z), d(z,y)) beyond tolerance
  NotUltrametric(std::size_t x_, std::size_t y_, std::size_t z_)
      : Error("NotUltrametric",
              "strong triangle inequality fails on (" + std::to_string(x_) +
                  "," + std::to_string(y_) + "," + std::to_string(z_) + ")"),
        x(x_), y(y_), z(z_) {}
};

struct AlphabetTooSmall : Error {
  unsigned required_k;  // smallest alphabet that admits the coding
  explicit AlphabetTooSmall(unsigned k)
      : Error("AlphabetTooSmall",
              "cluster tree needs alphabet size at least " + std::to_string(k)),
        required_k(k) {}
};

struct ScanTooLarge : Error {
  std::size_t n;
  explicit ScanTooLarge(std::size_t n_)
      : Error("ScanTooLarge",
              "quadruple scan over " + std::to_string(n_) +
                  " points exceeds the exact cap; rerun with force to subsample"),
        n(n_) {}
};

struct QuasiMetricInput : Error {
  QuasiMetricInput()
      : Error("QuasiMetricInput",
              "operation requires a verified metric, got an unvalidated quasimetric") {}
};

struct DegenerateInput : Error {
  explicit DegenerateInput(const std::string& what) : Error("DegenerateInput", what) {}
};

struct InvalidParams : Error {
  explicit InvalidParams(const std::string& what) : Error("InvalidParams", what) {}
};

struct NotFound : Error {
  explicit NotFound(const std::string& what) : Error("NotFound", what) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error("ParseError", what) {}
};

}  // namespace umt
