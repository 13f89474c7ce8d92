#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "oracles.hpp"
#include "umt/generate.hpp"
#include "umt/props.hpp"
#include "umt/ultrametrize.hpp"

using namespace umt;
using helpers::line;
using helpers::rho_space;

TEST_CASE("subdominant ultrametric on pinned spaces") {
  FiniteMetricSpace s = line({0, 1, 3});
  FiniteMetricSpace sub = subdominant_ultrametric(s);
  CHECK(sub.dist(0, 1) == 1.0);
  CHECK(sub.dist(0, 2) == 2.0);  // through the middle point
  CHECK(sub.dist(1, 2) == 2.0);
  CHECK(check_ultrametric(sub).is_ultrametric);

  DistortionValue d = ultrametrization_distortion(s);
  CHECK(d.value == 1.5);
  CHECK(d.a == 0);
  CHECK(d.b == 2);

  // unit-step line: every subdominant distance collapses to one step
  FiniteMetricSpace steps = line({0, 1, 2, 3, 4});
  FiniteMetricSpace subs = subdominant_ultrametric(steps);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) CHECK(subs.dist(i, j) == 1.0);
  DistortionValue ds = ultrametrization_distortion(steps);
  CHECK(ds.value == 4.0);
  CHECK(ds.a == 0);
  CHECK(ds.b == 4);

  CHECK_THROWS_AS(subdominant_ultrametric(make_space({{0.0}})), DegenerateInput);
}

TEST_CASE("ultrametric inputs are fixed points") {
  SeededRng rng(31);
  for (int t = 0; t < 10; ++t) {
    FiniteMetricSpace u = random_ultrametric(2 + rng.index(15), rng);
    FiniteMetricSpace sub = subdominant_ultrametric(u);
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < u.size(); ++j) CHECK(sub.dist(i, j) == u.dist(i, j));
  }
}

TEST_CASE("subdominant matches the chain enumeration oracle") {
  SeededRng rng(32);
  for (int t = 0; t < 30; ++t) {
    FiniteMetricSpace s = t % 2 == 0 ? random_euclidean(3 + rng.index(6), rng)
                                     : clustered_line(rng, 2);
    if (s.size() > 8) continue;
    FiniteMetricSpace sub = subdominant_ultrametric(s);
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j)
        CHECK(sub.dist(i, j) == oracle::subdominant_dist(s, i, j));
  }
}

TEST_CASE("subdominant dominates every dominated ultrametric") {
  SeededRng rng(33);
  for (int t = 0; t < 200; ++t) {
    FiniteMetricSpace s = random_euclidean(3 + rng.index(8), rng);
    FiniteMetricSpace u = random_ultrametric(s.size(), rng);
    double f = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j)
        f = std::min(f, s.dist(i, j) / u.dist(i, j));
    FiniteMetricSpace sub = subdominant_ultrametric(s);
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        CHECK(f * u.dist(i, j) <= s.dist(i, j) * (1 + 1e-12));
        CHECK(f * u.dist(i, j) <= sub.dist(i, j) * (1 + 1e-12));
      }
  }
}

TEST_CASE("modulus bounds the ultrametrization gap") {
  SeededRng rng(34);
  for (int t = 0; t < 20; ++t) {
    FiniteMetricSpace s = t % 2 == 0 ? random_euclidean(3 + rng.index(10), rng)
                                     : clustered_line(rng, 3);
    double mu = disconnectedness_modulus(s).modulus;
    FiniteMetricSpace sub = subdominant_ultrametric(s);
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        CHECK(sub.dist(i, j) <= s.dist(i, j) * (1 + 1e-12));
        CHECK(mu * s.dist(i, j) <= sub.dist(i, j) * (1 + 1e-12));
      }
    CHECK(ultrametrization_distortion(s).value <= 1.0 / mu + 1e-9);
  }
}

TEST_CASE("dendrogram of the depth-2 binary word space") {
  Dendrogram d = build_dendrogram(rho_space(2, 2, BigRational(1, 2)));
  REQUIRE(d.nodes.size() == 7);
  const auto& root = d.nodes[d.root];
  CHECK(root.height == 1.0);
  REQUIRE(root.children.size() == 2);
  for (std::size_t c : root.children) {
    CHECK(d.nodes[c].height == 0.5);
    REQUIRE(d.nodes[c].children.size() == 2);
    for (std::size_t g : d.nodes[c].children) CHECK(d.is_leaf(g));
  }
  // children are ordered by least leaf: 00 side first
  std::size_t first = d.nodes[root.children[0]].children[0];
  CHECK(d.labels[*d.nodes[first].leaf] == "00");
}

TEST_CASE("equal merge heights collapse into one node") {
  Dendrogram d = build_dendrogram(make_space(
      {{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}}));
  REQUIRE(d.nodes.size() == 5);
  CHECK(d.nodes[d.root].children.size() == 4);
  CHECK(d.nodes[d.root].height == 1.0);
}

TEST_CASE("tiny spaces") {
  Dendrogram one = build_dendrogram(make_space({{0.0}}));
  CHECK(one.nodes.size() == 1);
  CHECK(one.is_leaf(one.root));
  Dendrogram two = build_dendrogram(make_space({{0, 3}, {3, 0}}));
  CHECK(two.nodes.size() == 3);
  CHECK(two.nodes[two.root].height == 3.0);
}

TEST_CASE("non-ultrametric inputs are rejected with a live witness") {
  FiniteMetricSpace s = line({0, 1, 2});
  try {
    build_dendrogram(s);
    FAIL("expected rejection");
  } catch (const NotUltrametric& e) {
    CHECK(s.dist(e.x, e.y) > std::max(s.dist(e.x, e.z), s.dist(e.z, e.y)));
  }
}

TEST_CASE("height ties within tolerance are contracted") {
  double h2 = 1.0 + 1e-13;
  FiniteMetricSpace s = make_space({{0, 1, h2, h2},
                                    {1, 0, h2, h2},
                                    {h2, h2, 0, 1},
                                    {h2, h2, 1, 0}});
  CHECK(build_dendrogram(s).nodes.size() == 5);       // one four-way root
  CHECK(build_dendrogram(s, 0.0).nodes.size() == 7);  // exact: two levels
}

TEST_CASE("dendrogram metric round trip") {
  SeededRng rng(35);
  for (int t = 0; t < 10; ++t) {
    FiniteMetricSpace u = random_ultrametric(2 + rng.index(19), rng);
    Dendrogram d = build_dendrogram(u);
    FiniteMetricSpace back = dendrogram_metric(d);
    CHECK(back.labels() == u.labels());
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < u.size(); ++j)
        CHECK(back.dist(i, j) == u.dist(i, j));
    // structural sanity: internal nodes have >= 2 strictly lower children
    for (std::size_t id = 0; id < d.nodes.size(); ++id) {
      if (d.is_leaf(id)) continue;
      CHECK(d.nodes[id].children.size() >= 2);
      for (std::size_t c : d.nodes[id].children)
        CHECK(d.nodes[c].height < d.nodes[id].height);
    }
  }
}

TEST_CASE("handmade dendrogram metric") {
  Dendrogram d;
  d.labels = {"a", "b", "c"};
  d.nodes.push_back({0.0, {}, 0});            // a
  d.nodes.push_back({0.0, {}, 1});            // b
  d.nodes.push_back({0.0, {}, 2});            // c
  d.nodes.push_back({1.0, {1, 2}, std::nullopt});
  d.nodes.push_back({2.0, {0, 3}, std::nullopt});
  d.root = 4;
  FiniteMetricSpace m = dendrogram_metric(d);
  CHECK(m.dist(0, 1) == 2.0);
  CHECK(m.dist(0, 2) == 2.0);
  CHECK(m.dist(1, 2) == 1.0);
}
