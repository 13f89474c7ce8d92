#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "umt/deform.hpp"
#include "umt/distort.hpp"
#include "umt/generate.hpp"
#include "umt/props.hpp"

using namespace umt;
using helpers::line;
using helpers::rho_space;

TEST_CASE("flattening on pinned spaces") {
  // unit equilateral: distances stay 1
  FiniteMetricSpace eq = make_space({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, {"a", "b", "o"});
  FiniteMetricSpace eqf = invert(eq, 2);
  REQUIRE(eqf.size() == 2);
  CHECK(eqf.dist(0, 1) == 1.0);
  CHECK(eqf.labels() == std::vector<std::string>{"a", "b"});

  // collinear 0,1,2 flattened at 0
  FiniteMetricSpace l = invert(line({0, 1, 2}), 0);
  CHECK(l.dist(0, 1) == 0.5);

  CHECK_THROWS_AS(invert(make_space({{0, 1}, {1, 0}}), 0), TooFewPoints);
  CHECK_THROWS_AS(invert(eq, 7), InvalidParams);
}

TEST_CASE("flattening the bounded word metric gives the unbounded one") {
  for (auto [k, depth] : {std::pair<unsigned, std::size_t>{2, 3}, {3, 2}, {2, 4}}) {
    FiniteMetricSpace rho = rho_space(k, depth, BigRational(1, 2));
    FiniteMetricSpace flat = invert(rho, 0);  // all-zero word is index 0

    CantorSpace c;
    c.k = k;
    c.lambda = BigRational(1, 2);
    c.depth = depth;
    c.points = enumerate_words(k, depth);
    c.points.erase(c.points.begin());
    c.base = zero_word(depth);
    FiniteMetricSpace sig = materialize(c, CantorMetric::Sigma);

    REQUIRE(flat.size() == sig.size());
    for (std::size_t i = 0; i < sig.size(); ++i)
      for (std::size_t j = i + 1; j < sig.size(); ++j)
        CHECK(std::abs(flat.dist(i, j) - sig.dist(i, j)) <= 1e-12 * sig.dist(i, j));
  }
}

TEST_CASE("flattening preserves ultrametricity") {
  SeededRng rng(11);
  for (int t = 0; t < 25; ++t) {
    UltrametricGenOptions opts;
    opts.scale = rng.range(1e-2, 1e2);
    FiniteMetricSpace u = random_ultrametric(3 + rng.index(14), rng, opts);
    FiniteMetricSpace f = invert(u, rng.index(u.size()));
    CHECK(f.is_metric());
    CHECK(check_ultrametric(f, 1e-12).is_ultrametric);
  }
}

TEST_CASE("chordal extension on pinned spaces") {
  // diameter <= 1: identity on the old points, unit distance to infinity
  FiniteMetricSpace small = rho_space(2, 3, BigRational(1, 2));
  ExtendedSpace e = chordal_extend(small, 0);
  REQUIRE(e.size() == small.size() + 1);
  REQUIRE(e.infinity == small.size());
  CHECK(e.space.label(small.size()) == "inf");
  for (std::size_t i = 0; i < small.size(); ++i) {
    CHECK(e.space.dist(i, small.size()) == 1.0);
    for (std::size_t j = i + 1; j < small.size(); ++j)
      CHECK(e.space.dist(i, j) == small.dist(i, j));
  }

  // 2-and-4 heights: d(x,y) = 4 forced, extension halves it
  FiniteMetricSpace u = make_space({{0, 2, 4}, {2, 0, 4}, {4, 4, 0}}, {"a", "x", "y"});
  ExtendedSpace v = chordal_extend(u, 0);
  CHECK(v.space.dist(1, 2) == 0.5);   // 4 / (2*4)
  CHECK(v.space.dist(1, 3) == 0.5);   // 1 / 2
  CHECK(v.space.dist(2, 3) == 0.25);  // 1 / 4
  CHECK(v.space.dist(0, 3) == 1.0);   // base is within distance 1 of itself

  FiniteMetricSpace far = make_space({{0, 5}, {5, 0}});
  CHECK(chordal_extend(far, 0).space.dist(1, 2) == 0.2);  // 1/5
}

TEST_CASE("chordal extension preserves ultrametricity with infinity included") {
  SeededRng rng(12);
  for (int t = 0; t < 25; ++t) {
    UltrametricGenOptions opts;
    opts.scale = rng.range(1e-3, 1e3);
    FiniteMetricSpace u = random_ultrametric(3 + rng.index(14), rng, opts);
    ExtendedSpace e = chordal_extend(u, rng.index(u.size()));
    CHECK(e.space.is_metric());
    CHECK(e.space.diameter() <= 1.0 + 1e-12);
    CHECK(check_ultrametric(e.space, 1e-12).is_ultrametric);
  }
}

TEST_CASE("identity onto the chordal extension is moebius") {
  SeededRng rng(13);
  for (int t = 0; t < 10; ++t) {
    UltrametricGenOptions opts;
    opts.scale = rng.range(1.0, 1e3);
    FiniteMetricSpace u = random_ultrametric(4 + rng.index(9), rng, opts);
    PointMap map = helpers::chordal_identity_map(u, rng.index(u.size()));
    MobiusResult mob = is_mobius(map, 1e-9);
    CHECK(mob.mobius);
    QmResult qm = weak_qm_constant(map);
    CHECK(qm.K <= 1.0 + 1e-9);
  }
}

TEST_CASE("sphericalization on pinned spaces") {
  FiniteMetricSpace eq = make_space({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  CHECK(sphericalize(eq, 0).dist(1, 2) == 0.25);

  FiniteMetricSpace u = make_space({{0, 1, 4}, {1, 0, 4}, {4, 4, 0}}, {"p", "x", "y"});
  FiniteMetricSpace sp = sphericalize(u, 0);
  CHECK(sp.dist(0, 1) == 0.5);
  CHECK(sp.dist(0, 2) == 0.8);
  CHECK(sp.dist(1, 2) == 0.4);
  // the ultrametric input came out non-ultrametric
  CHECK_FALSE(check_ultrametric(sp).is_ultrametric);

  FiniteMetricSpace one = make_space({{0.0}});
  CHECK(sphericalize(one, 0).size() == 1);
  CHECK_THROWS_AS(sphericalize(eq, 3), InvalidParams);
}

TEST_CASE("sphericalization counterexample search") {
  SphericalizationCounterexample c = find_sphericalization_counterexample();
  REQUIRE(c.space.size() == 3);

  // the first grid hit: half-power heights 64 and 32
  CHECK(c.space.dist(0, 1) == 64.0);
  CHECK(c.space.dist(0, 2) == 32.0);
  CHECK(c.space.dist(1, 2) == 64.0);
  CHECK(c.center == 0);
  CHECK(check_ultrametric(c.space).is_ultrametric);

  CHECK(c.witness.triple.x == 0);
  CHECK(c.witness.triple.y == 1);
  CHECK(c.witness.triple.z == 2);
  CHECK(c.witness.lhs == 64.0 / 65.0);
  CHECK(c.witness.rhs == 32.0 / 33.0);
  CHECK(c.margin == Catch::Approx(1.0 / 65.0).epsilon(1e-12));

  // the deformed space is exactly the sphericalization and the witness
  // really violates the strong triangle inequality there
  FiniteMetricSpace again = sphericalize(c.space, c.center);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(c.deformed.dist(i, j) == again.dist(i, j));
  CHECK(c.witness.lhs == c.deformed.dist(0, 1));
  CHECK(c.witness.rhs ==
        std::max(c.deformed.dist(0, 2), c.deformed.dist(2, 1)));
  CHECK(c.witness.lhs > c.witness.rhs);
}

TEST_CASE("counterexample search budget and determinism") {
  CHECK_THROWS_AS(find_sphericalization_counterexample(16, 0, 0), NotFound);
  CHECK_THROWS_AS(find_sphericalization_counterexample(16, 0, 1), NotFound);
  SphericalizationCounterexample a = find_sphericalization_counterexample(16, 0, 2);
  CHECK(a.margin == Catch::Approx(1.0 / 65.0).epsilon(1e-12));

  SphericalizationCounterexample b = find_sphericalization_counterexample(6, 7);
  SphericalizationCounterexample c = find_sphericalization_counterexample(6, 7);
  REQUIRE(b.space.size() == c.space.size());
  for (std::size_t i = 0; i < b.space.size(); ++i)
    for (std::size_t j = 0; j < b.space.size(); ++j)
      CHECK(b.space.dist(i, j) == c.space.dist(i, j));
  CHECK(b.margin == c.margin);
  CHECK_THROWS_AS(find_sphericalization_counterexample(2), InvalidParams);
}
