#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "umt/cantor.hpp"
#include "umt/errors.hpp"
#include "umt/exact.hpp"
#include "umt/metric_space.hpp"

namespace umt {

// All generators draw through this wrapper: the mt19937_64 stream is pinned
// by the standard and the derived values below avoid libm, so outputs are
// reproducible across platforms for a given seed.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }
  std::size_t index(std::size_t bound) {
    return static_cast<std::size_t>(eng_() % bound);
  }
  double real01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 eng_;
};

struct UltrametricGenOptions {
  unsigned max_children = 4;       // branching bound of the cluster tree
  std::int64_t max_level_skip = 2; // child exponent grows by 1 + [0, skip]
  double lambda = 0.5;             // heights are scale * lambda^e
  double scale = 1.0;              // diameter of the result (for n >= 2)
};

// Random ultrametric by recursive partition: the current point set splits
// into 2..max_children nonempty parts, cross distances equal the current
// height, and parts recurse with a strictly larger exponent.  Heights are
// computed by repeated multiplication, so the matrix is exactly ultrametric.
inline FiniteMetricSpace random_ultrametric(std::size_t n, SeededRng& rng,
                                            const UltrametricGenOptions& opts = {}) {
  if (n < 1) throw DegenerateInput("generator needs at least 1 point");
  if (!(opts.lambda > 0.0 && opts.lambda < 1.0))
    throw InvalidParams("lambda must lie in (0,1)");
  if (opts.max_children < 2) throw InvalidParams("branching bound must be at least 2");
  if (!(opts.scale > 0.0)) throw InvalidParams("scale must be positive");

  std::vector<double> flat(n * n, 0.0);
  auto height = [&](std::int64_t e) {
    double h = opts.scale;
    for (std::int64_t t = 0; t < e; ++t) h *= opts.lambda;
    if (h <= 0.0) throw SizeLimitExceeded("generated heights underflow");
    return h;
  };
  std::function<void(const std::vector<std::size_t>&, std::int64_t)> split =
      [&](const std::vector<std::size_t>& pts, std::int64_t e) {
        if (pts.size() == 1) return;
        std::size_t c =
            2 + rng.index(std::min<std::size_t>(opts.max_children, pts.size()) - 1);
        std::vector<std::vector<std::size_t>> buckets(c);
        for (std::size_t i = 0; i < pts.size(); ++i) {
          std::size_t b = i < c ? i : rng.index(c);  // first c seeds keep parts nonempty
          buckets[b].push_back(pts[i]);
        }
        double h = height(e);
        for (std::size_t bi = 0; bi < c; ++bi)
          for (std::size_t bj = bi + 1; bj < c; ++bj)
            for (std::size_t x : buckets[bi])
              for (std::size_t y : buckets[bj]) flat[x * n + y] = flat[y * n + x] = h;
        for (const auto& b : buckets) split(b, e + 1 + rng.range(0, opts.max_level_skip));
      };
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  split(all, 0);
  return FiniteMetricSpace::checked(default_labels(n), std::move(flat), true);
}

// Uniform points in the unit square under the Euclidean distance.
inline FiniteMetricSpace random_euclidean(std::size_t n, SeededRng& rng) {
  if (n < 1) throw DegenerateInput("generator needs at least 1 point");
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = rng.real01();
    ys[i] = rng.real01();
  }
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double dx = xs[i] - xs[j], dy = ys[i] - ys[j];
      m[i][j] = m[j][i] = std::sqrt(dx * dx + dy * dy);
    }
  return make_space(m);
}

// Line sample in clusters: centers at 0, 1, 4, 13, ... ((3^i - 1) / 2) with
// two or three jittered points each.  The tripling gaps guarantee that every
// chain modulus stays above 1/3: a pair inside a cluster of at most three
// points detours at ratio >= 1/2, and a cross-cluster pair must step over the
// widest gap between its clusters, which exceeds 2/3 of their distance.
inline FiniteMetricSpace clustered_line(SeededRng& rng, std::size_t clusters = 2,
                                        double spread = 0.05) {
  if (clusters < 2 || clusters > 12) throw InvalidParams("clusters must lie in [2,12]");
  if (!(spread > 0.0 && spread <= 0.05)) throw InvalidParams("spread must lie in (0,0.05]");
  std::vector<double> pos;
  double center = 0.0, step = 1.0;
  for (std::size_t c = 0; c < clusters; ++c) {
    std::size_t m = 2 + rng.index(2);
    std::vector<double> offs;
    while (offs.size() < m) {
      double o = rng.real01() * spread;
      if (std::find(offs.begin(), offs.end(), o) == offs.end()) offs.push_back(o);
    }
    std::sort(offs.begin(), offs.end());
    for (double o : offs) pos.push_back(center + o);
    center += step;
    step *= 3.0;
  }
  std::size_t n = pos.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m[i][j] = m[j][i] = pos[j] - pos[i];
  return make_space(m);
}

struct SigmaFamily {
  CantorSpace cantor;       // symbolic description; base is the all-zero word
  FiniteMetricSpace space;  // flattened metric over all words except the base
  std::size_t far_point;    // index of the word 10...0
};

// The flattened metric over every depth-m word except the all-zero base.
// far_point sits in another first-symbol subtree than the base, so its
// distance row runs up to lambda^(1-m): an unbounded-looking sample whose
// one-point extension at far_point recovers a bounded word metric.
inline SigmaFamily sigma_family(unsigned k, const BigRational& lambda,
                                std::size_t depth) {
  std::vector<Word> words = enumerate_words(k, depth);
  CantorSpace cs;
  cs.k = k;
  cs.lambda = lambda;
  cs.depth = depth;
  cs.base = zero_word(depth);
  cs.points.reserve(words.size() - 1);
  for (const auto& w : words)
    if (w != cs.base) cs.points.push_back(w);
  FiniteMetricSpace space = materialize(cs, CantorMetric::Sigma);
  Word far = zero_word(depth);
  far.symbols[0] = 1;
  std::size_t fi = 0;
  for (std::size_t i = 0; i < cs.points.size(); ++i)
    if (cs.points[i] == far) {
      fi = i;
      break;
    }
  return SigmaFamily{std::move(cs), std::move(space), fi};
}

}  // namespace umt
