#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "umt/exact.hpp"
#include "umt/metric_space.hpp"

namespace umt {

// A point of the symbolic Cantor set: a fixed-depth string of symbols < k.
struct Word {
  std::vector<std::uint32_t> symbols;

  std::size_t depth() const { return symbols.size(); }
  friend bool operator==(const Word& a, const Word& b) { return a.symbols == b.symbols; }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }
  friend bool operator<(const Word& a, const Word& b) { return a.symbols < b.symbols; }
};

// Text form: base-k digit string, one digit per symbol (requires k <= 10).
inline std::string word_to_string(const Word& w) {
  std::string s;
  s.reserve(w.depth());
  for (auto sym : w.symbols) {
    if (sym > 9) throw InvalidParams("word text form needs symbols <= 9");
    s.push_back(static_cast<char>('0' + sym));
  }
  return s;
}

inline Word word_from_string(const std::string& s) {
  Word w;
  w.symbols.reserve(s.size());
  for (char c : s) {
    if (c < '0' || c > '9') throw ParseError("bad word digit in \"" + s + "\"");
    w.symbols.push_back(static_cast<std::uint32_t>(c - '0'));
  }
  return w;
}

// Length of the longest common prefix; +infinity when the words are equal,
// zero when they differ in the first symbol.
inline ExpInt common_prefix_length(const Word& x, const Word& y) {
  if (x.depth() != y.depth()) throw DepthMismatch(y.depth(), x.depth());
  std::size_t i = 0;
  while (i < x.depth() && x.symbols[i] == y.symbols[i]) ++i;
  if (i == x.depth()) return ExpInt::inf();
  return ExpInt::of(static_cast<std::int64_t>(i));
}

// Bounded metric: rho(x,y) = lambda^L(x,y).
inline ExactDistance rho(const Word& x, const Word& y) {
  return ExactDistance{common_prefix_length(x, y)};
}

// Flattened metric around the base point o:
// sigma(x,y) = lambda^(L(x,y) - L(x,o) - L(y,o)), defined for x,y != o.
// The exponent may be negative, so sigma is unbounded as depth grows.
inline ExactDistance sigma(const Word& x, const Word& y, const Word& o) {
  if (x == o || y == o) throw BasePointArgument();
  ExpInt lxy = common_prefix_length(x, y);
  ExpInt lxo = common_prefix_length(x, o);
  ExpInt lyo = common_prefix_length(y, o);
  return ExactDistance{lxy - lxo - lyo};
}

struct CantorSpace {
  unsigned k = 2;
  BigRational lambda = BigRational(1, 2);
  std::size_t depth = 1;
  std::vector<Word> points;  // distinct, all of the given depth
  Word base;                 // default all-zeros

  void validate() const {
    if (k < 2) throw InvalidParams("alphabet size must be at least 2");
    if (depth < 1) throw InvalidParams("depth must be at least 1");
    if (lambda <= 0 || lambda >= 1) throw InvalidParams("lambda must lie in (0,1)");
    if (base.depth() != depth) throw DepthMismatch(base.depth(), depth);
    for (auto s : base.symbols)
      if (s >= k) throw InvalidParams("base symbol out of range");
    for (const auto& w : points) {
      if (w.depth() != depth) throw DepthMismatch(w.depth(), depth);
      for (auto s : w.symbols)
        if (s >= k) throw InvalidParams("word symbol out of range");
    }
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = i + 1; j < points.size(); ++j)
        if (points[i] == points[j]) throw DuplicatePoints(i, j);
  }
};

inline Word zero_word(std::size_t depth) {
  Word w;
  w.symbols.assign(depth, 0);
  return w;
}

// All k^depth words in lexicographic order.  Guards: k >= 2, 1 <= depth <= 16,
// k^depth <= 10^6.
inline std::vector<Word> enumerate_words(unsigned k, std::size_t depth) {
  if (k < 2) throw InvalidParams("alphabet size must be at least 2");
  if (depth < 1 || depth > 16) throw InvalidParams("depth must lie in [1,16]");
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < depth; ++i) {
    total *= k;
    if (total > 1'000'000) throw SizeLimitExceeded("word enumeration exceeds 10^6 points");
  }
  std::vector<Word> words;
  words.reserve(total);
  Word w = zero_word(depth);
  for (std::uint64_t c = 0; c < total; ++c) {
    words.push_back(w);
    for (std::size_t pos = depth; pos-- > 0;) {
      if (++w.symbols[pos] < k) break;
      w.symbols[pos] = 0;
    }
  }
  return words;
}

enum class CantorMetric { Rho, Sigma };

// Materializes the space as a real distance matrix with word-string labels.
// In sigma mode, the base point must not be among the points (BaseIncluded);
// lambda powers are evaluated exactly and converted once per exponent.
inline FiniteMetricSpace materialize(const CantorSpace& space, CantorMetric metric) {
  space.validate();
  std::size_t n = space.points.size();
  if (metric == CantorMetric::Sigma)
    for (std::size_t i = 0; i < n; ++i)
      if (space.points[i] == space.base) throw BaseIncluded(i);
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = word_to_string(space.points[i]);

  std::vector<std::int64_t> expo(n * n, 0);
  std::int64_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      ExactDistance d = metric == CantorMetric::Rho
                            ? rho(space.points[i], space.points[j])
                            : sigma(space.points[i], space.points[j], space.base);
      // distinct points never yield distance zero
      std::int64_t e = d.exponent.value;
      expo[i * n + j] = expo[j * n + i] = e;
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
  std::vector<double> table(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t e = lo; e <= hi; ++e)
    table[static_cast<std::size_t>(e - lo)] =
        rational_to_double(rational_pow(space.lambda, e));
  std::vector<double> flat(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j)
        flat[i * n + j] = table[static_cast<std::size_t>(expo[i * n + j] - lo)];
  // both metrics satisfy the strong triangle inequality, so this never flags
  return FiniteMetricSpace::checked(std::move(labels), std::move(flat), true);
}

// Exponent matrix of sigma over the given points (used by exact scans).
inline std::vector<std::int64_t> sigma_exponents(const std::vector<Word>& pts,
                                                 const Word& o) {
  std::size_t n = pts.size();
  std::vector<std::int64_t> e(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::int64_t v = sigma(pts[i], pts[j], o).exponent.value;
      e[i * n + j] = e[j * n + i] = v;
    }
  return e;
}

struct ExactMobiusResult {
  bool preserved = true;
  std::array<Word, 4> witness{};  // a violating quadruple when !preserved
};

// Exact cross-ratio preservation for the identity (F^depth, rho) ->
// (F^depth \ {o} with infinity, sigma), sending o to the point at infinity.
// Cross ratios are lambda powers; the check compares integer exponents of the
// three pairing products per unordered quadruple, which covers every ordering.
// Distances to infinity on the sigma side are deleted per the cross-ratio rule.
inline ExactMobiusResult rho_sigma_identity_mobius_exact(const std::vector<Word>& pts,
                                                         const Word& o) {
  std::size_t n = pts.size();
  std::size_t oi = n;  // index of o among pts, if present
  for (std::size_t i = 0; i < n; ++i)
    if (pts[i] == o) oi = i;

  std::vector<std::int64_t> lrho(n * n, 0);  // prefix length = rho exponent
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto l = common_prefix_length(pts[i], pts[j]);
      lrho[i * n + j] = lrho[j * n + i] = l.value;
    }
  std::vector<std::int64_t> lo(n, 0);  // L(x, o)
  for (std::size_t i = 0; i < n; ++i)
    if (i != oi) lo[i] = common_prefix_length(pts[i], o).value;

  auto sig = [&](std::size_t a, std::size_t b) {
    return lrho[a * n + b] - lo[a] - lo[b];
  };
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      for (std::size_t z = y + 1; z < n; ++z)
        for (std::size_t w = z + 1; w < n; ++w) {
          // pairing exponents on the rho side
          std::int64_t r1 = lrho[x * n + y] + lrho[z * n + w];
          std::int64_t r2 = lrho[x * n + z] + lrho[y * n + w];
          std::int64_t r3 = lrho[x * n + w] + lrho[y * n + z];
          // sigma side; factors touching o (mapped to infinity) are deleted
          std::int64_t s1, s2, s3;
          if (oi == x) {
            s1 = sig(z, w); s2 = sig(y, w); s3 = sig(y, z);
          } else if (oi == y) {
            s1 = sig(z, w); s2 = sig(x, z); s3 = sig(x, w);
          } else if (oi == z) {
            s1 = sig(x, y); s2 = sig(y, w); s3 = sig(x, w);
          } else if (oi == w) {
            s1 = sig(x, y); s2 = sig(x, z); s3 = sig(y, z);
          } else {
            s1 = sig(x, y) + sig(z, w);
            s2 = sig(x, z) + sig(y, w);
            s3 = sig(x, w) + sig(y, z);
          }
          // all cross ratios of the quadruple agree iff pairing differences do
          if (r2 - r1 != s2 - s1 || r3 - r1 != s3 - s1)
            return ExactMobiusResult{false, {pts[x], pts[y], pts[z], pts[w]}};
        }
  return ExactMobiusResult{};
}

}  // namespace umt
