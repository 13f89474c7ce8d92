#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "umt/cantor.hpp"
#include "umt/exact.hpp"
#include "umt/metric_space.hpp"

using namespace umt;

namespace {

FiniteMetricSpace line(const std::vector<double>& pos) {
  std::size_t n = pos.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = std::abs(pos[i] - pos[j]);
  return make_space(m);
}

}  // namespace

TEST_CASE("construction validates the matrix") {
  CHECK(make_space({{0.0}}).size() == 1);
  CHECK(make_space({{0, 1}, {1, 0}}).size() == 2);
  CHECK(make_space({{0, 1}, {1, 0}}).is_metric());

  try {
    make_space({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}});
    FAIL("expected a triangle violation");
  } catch (const TriangleViolation& e) {
    CHECK(e.i == 0);
    CHECK(e.j == 1);
    CHECK(e.k == 2);
  }

  CHECK_THROWS_AS(make_space({{0, 1}, {2, 0}}), AsymmetricMatrix);
  CHECK_THROWS_AS(make_space({{0, -1}, {-1, 0}}), NegativeDistance);
  double nan = std::nan("");
  CHECK_THROWS_AS(make_space({{0, nan}, {nan, 0}}), NegativeDistance);
  CHECK_THROWS_AS(make_space({{1}}), NegativeDistance);  // nonzero diagonal
  CHECK_THROWS_AS(make_space({{0, 0}, {0, 0}}), DuplicatePoints);
  CHECK_THROWS_AS(make_space({{0, 1}, {1, 0}}, {"a", "a"}), DuplicateLabels);
  CHECK_THROWS_AS(make_space({{0, 1}, {1, 0}, {1, 1, 0}}), InvalidParams);

  FiniteMetricSpace s = make_space({{0, 2}, {2, 0}}, {"a", "b"});
  CHECK(s.label(1) == "b");
  CHECK(s.find_label("b") == std::size_t{1});
  CHECK_FALSE(s.find_label("c").has_value());
  CHECK(s.diameter() == 2.0);
}

TEST_CASE("quasimetric flagging") {
  // a strong-triangle-passing but triangle-failing matrix cannot arise; use a
  // plain triangle failure instead
  FiniteMetricSpace q =
      space_from_parts(default_labels(3), {0, 1, 3, 1, 0, 1, 3, 1, 0});
  CHECK_FALSE(q.is_metric());
  CHECK_THROWS_AS(q.require_metric(), QuasiMetricInput);
  FiniteMetricSpace ok = space_from_parts(default_labels(2), {0, 1, 1, 0});
  CHECK(ok.is_metric());
  CHECK_NOTHROW(ok.require_metric());
}

TEST_CASE("cross ratio on collinear points") {
  FiniteMetricSpace s = line({0, 1, 2, 3});
  CHECK(cross_ratio(s, 0, 1, 2, 3) == Catch::Approx(4.0).epsilon(1e-14));
  CHECK(cross_ratio(s, 0, 2, 1, 3) == Catch::Approx(0.25).epsilon(1e-14));
  // swapping the middle arguments inverts the defining products
  double r = cross_ratio(s, 0, 1, 2, 3) * cross_ratio(s, 0, 2, 1, 3);
  CHECK(r == Catch::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(cross_ratio(s, 0, 1, 2, 2), DuplicatePoints);
  CHECK_THROWS_AS(cross_ratio(s, 0, 1, 2, 9), InvalidParams);
}

TEST_CASE("cross ratio is scale invariant") {
  FiniteMetricSpace s = line({0, 1, 2, 3});
  FiniteMetricSpace t = line({0, 37.5, 75, 112.5});
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 4; ++y)
      for (std::size_t z = 0; z < 4; ++z)
        for (std::size_t w = 0; w < 4; ++w) {
          std::set<std::size_t> dd{x, y, z, w};
          if (dd.size() != 4) continue;
          CHECK(cross_ratio(s, x, y, z, w) ==
                Catch::Approx(cross_ratio(t, x, y, z, w)).epsilon(1e-12));
        }
}

TEST_CASE("cross ratio deletes factors at infinity") {
  // {0,1,2} on the line plus a marked point at distance 1 from each
  FiniteMetricSpace s = make_space(
      {{0, 1, 2, 1}, {1, 0, 1, 1}, {2, 1, 0, 1}, {1, 1, 1, 0}});
  ExtendedSpace e{s, 3};
  CHECK(cross_ratio(e, 0, 1, 2, 3) == Catch::Approx(2.0).epsilon(1e-14));
  // with no point marked, the same quadruple uses all four factors
  CHECK(cross_ratio(as_extended(s), 0, 1, 2, 3) ==
        Catch::Approx(2.0 * 1.0 / (1.0 * 1.0)).epsilon(1e-14));
}

TEST_CASE("deleted form is the far-point limit") {
  for (double M : {1e3, 1e6}) {
    FiniteMetricSpace far = line({0, 1, 2, M});
    double r = cross_ratio(far, 0, 1, 2, 3);
    double dev = std::abs(r - 2.0) / 2.0;
    CHECK(dev > 0.0);
    CHECK(dev <= 2.0 / M);
  }
}

TEST_CASE("common prefix length") {
  Word a = word_from_string("010"), b = word_from_string("011");
  CHECK(common_prefix_length(a, b) == ExpInt::of(2));
  CHECK(common_prefix_length(a, a) == ExpInt::inf());
  CHECK(common_prefix_length(word_from_string("100"), word_from_string("000")) ==
        ExpInt::of(0));
  try {
    common_prefix_length(a, word_from_string("0110"));
    FAIL("expected a depth mismatch");
  } catch (const DepthMismatch& e) {
    CHECK(e.got == 4);
    CHECK(e.expected == 3);
  }
  CHECK(word_to_string(word_from_string("0102")) == "0102");
  CHECK_THROWS_AS(word_from_string("01a"), ParseError);
}

TEST_CASE("rho values") {
  Word a = word_from_string("010"), b = word_from_string("011");
  CHECK(rho(a, b) == ExactDistance::power(2));
  CHECK(exact_distance_value(rho(a, b), BigRational(1, 2)) == 0.25);
  CHECK(rho(a, a).is_zero());
  CHECK(rho(word_from_string("100"), word_from_string("011")) ==
        ExactDistance::power(0));
}

TEST_CASE("sigma values") {
  Word o = word_from_string("000");
  auto sig = [&](const char* x, const char* y) {
    return sigma(word_from_string(x), word_from_string(y), o);
  };
  CHECK(sig("100", "110") == ExactDistance::power(1));
  CHECK(sig("010", "011") == ExactDistance::power(0));
  CHECK(sig("001", "010") == ExactDistance::power(-2));
  CHECK(sig("001", "010") == sig("010", "001"));  // symmetric
  CHECK(sig("001", "001").is_zero());             // vanishes on the diagonal
  CHECK_THROWS_AS(sig("000", "010"), BasePointArgument);
  CHECK_THROWS_AS(sig("010", "000"), BasePointArgument);
  // lambda^{-2} > 1 realizes unboundedness
  CHECK(exact_distance_value(sig("001", "010"), BigRational(1, 2)) == 4.0);
}

TEST_CASE("sigma factors through rho") {
  Word o = zero_word(3);
  auto words = enumerate_words(2, 3);
  for (const auto& x : words) {
    if (x == o) continue;
    for (const auto& y : words) {
      if (y == o || y == x) continue;
      CHECK(sigma(x, y, o) == rho(x, y) / (rho(x, o) * rho(y, o)));
    }
  }
}

TEST_CASE("word enumeration") {
  auto one = enumerate_words(2, 1);
  REQUIRE(one.size() == 2);
  CHECK(word_to_string(one[0]) == "0");
  CHECK(word_to_string(one[1]) == "1");

  auto two = enumerate_words(2, 2);
  REQUIRE(two.size() == 4);
  std::vector<std::string> got;
  for (const auto& w : two) got.push_back(word_to_string(w));
  CHECK(got == std::vector<std::string>{"00", "01", "10", "11"});

  auto nine = enumerate_words(3, 2);
  REQUIRE(nine.size() == 9);
  CHECK(word_to_string(nine.front()) == "00");
  CHECK(word_to_string(nine.back()) == "22");

  CHECK_THROWS_AS(enumerate_words(1, 2), InvalidParams);
  CHECK_THROWS_AS(enumerate_words(2, 0), InvalidParams);
  CHECK_THROWS_AS(enumerate_words(2, 17), InvalidParams);
  CHECK_THROWS_AS(enumerate_words(10, 7), SizeLimitExceeded);
  CHECK(enumerate_words(2, 16).size() == 65536);
}

TEST_CASE("materialized rho matrix") {
  CantorSpace c;
  c.k = 2;
  c.lambda = BigRational(1, 2);
  c.depth = 2;
  c.points = enumerate_words(2, 2);
  c.base = zero_word(2);
  FiniteMetricSpace s = materialize(c, CantorMetric::Rho);
  REQUIRE(s.size() == 4);
  CHECK(s.is_metric());
  CHECK(s.label(2) == "10");
  std::set<double> values;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) values.insert(s.dist(i, j));
  CHECK(values == std::set<double>{0.5, 1.0});

  CantorSpace single = c;
  single.points = {word_from_string("01")};
  FiniteMetricSpace one = materialize(single, CantorMetric::Rho);
  REQUIRE(one.size() == 1);
  CHECK(one.dist(0, 0) == 0.0);
}

TEST_CASE("materialized sigma matrix") {
  CantorSpace c;
  c.k = 2;
  c.lambda = BigRational(1, 2);
  c.depth = 2;
  c.points = {word_from_string("01"), word_from_string("10"), word_from_string("11")};
  c.base = zero_word(2);
  FiniteMetricSpace s = materialize(c, CantorMetric::Sigma);
  REQUIRE(s.size() == 3);
  CHECK(s.dist(0, 1) == 2.0);  // sigma(01,10) = lambda^(0-1-0)
  CHECK(s.dist(0, 2) == 2.0);
  CHECK(s.dist(1, 2) == 0.5);  // sigma(10,11) = lambda^(1-0-0)

  CantorSpace bad = c;
  bad.points.push_back(zero_word(2));
  try {
    materialize(bad, CantorMetric::Sigma);
    FAIL("expected the base point to be rejected");
  } catch (const BaseIncluded& e) {
    CHECK(e.index == 3);
  }
  CHECK_NOTHROW(materialize(bad, CantorMetric::Rho));
}

TEST_CASE("cantor space validation") {
  CantorSpace c;
  c.k = 1;
  CHECK_THROWS_AS(c.validate(), InvalidParams);
  c.k = 2;
  c.lambda = BigRational(3, 2);
  CHECK_THROWS_AS(c.validate(), InvalidParams);
  c.lambda = BigRational(1, 2);
  c.depth = 2;
  c.base = word_from_string("012");
  CHECK_THROWS_AS(c.validate(), DepthMismatch);
  c.base = word_from_string("02");
  CHECK_THROWS_AS(c.validate(), InvalidParams);  // symbol out of range
  c.base = word_from_string("01");
  c.points = {word_from_string("10"), word_from_string("10")};
  CHECK_THROWS_AS(c.validate(), DuplicatePoints);
  c.points = {word_from_string("10"), word_from_string("11")};
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("strong triangle inequality holds exactly for rho and sigma") {
  for (auto [k, depth] : {std::pair<unsigned, std::size_t>{2, 5}, {3, 3}}) {
    auto words = enumerate_words(k, depth);
    Word o = zero_word(depth);

    // rho: L(x,y) >= min(L(x,z), L(z,y)) over distinct triples, in integers
    std::size_t n = words.size();
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y) {
        std::int64_t exy = common_prefix_length(words[x], words[y]).value;
        for (std::size_t z = 0; z < n; ++z) {
          if (z == x || z == y) continue;
          std::int64_t a = common_prefix_length(words[x], words[z]).value;
          std::int64_t b = common_prefix_length(words[z], words[y]).value;
          REQUIRE(exy >= std::min(a, b));
        }
      }

    // sigma over the words away from the base
    std::vector<Word> pts;
    for (const auto& w : words)
      if (w != o) pts.push_back(w);
    auto e = sigma_exponents(pts, o);
    std::size_t m = pts.size();
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t y = x + 1; y < m; ++y)
        for (std::size_t z = 0; z < m; ++z) {
          if (z == x || z == y) continue;
          REQUIRE(e[x * m + y] >= std::min(e[x * m + z], e[z * m + y]));
        }
  }
}

TEST_CASE("prefix lengths only see positional equality") {
  // applying a separate symbol permutation at every position leaves L alone
  std::mt19937 eng(42);
  unsigned k = 3;
  std::size_t depth = 4;
  std::vector<std::vector<std::uint32_t>> perm(depth, {0, 1, 2});
  for (auto& p : perm) std::shuffle(p.begin(), p.end(), eng);
  auto words = enumerate_words(k, depth);
  std::shuffle(words.begin(), words.end(), eng);
  words.resize(20);
  auto apply = [&](const Word& w) {
    Word r = w;
    for (std::size_t i = 0; i < depth; ++i) r.symbols[i] = perm[i][w.symbols[i]];
    return r;
  };
  for (const auto& x : words)
    for (const auto& y : words)
      CHECK(common_prefix_length(apply(x), apply(y)) == common_prefix_length(x, y));
}

TEST_CASE("exact rational parsing and printing") {
  CHECK(parse_rational("1/2") == BigRational(1, 2));
  CHECK(parse_rational("7") == BigRational(7));
  CHECK(parse_rational("-3/9") == BigRational(-1, 3));
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK(rational_to_string(BigRational(1, 3)) == "1/3");
  CHECK(rational_to_string(BigRational(2)) == "2");
  CHECK(parse_rational(rational_to_string(BigRational(22, 7))) == BigRational(22, 7));
}

TEST_CASE("exact powers and distance arithmetic") {
  CHECK(rational_pow(BigRational(1, 2), -3) == BigRational(8));
  CHECK(rational_pow(BigRational(2, 3), 2) == BigRational(4, 9));
  CHECK(rational_pow(BigRational(1, 3), 0) == BigRational(1));

  // lambda < 1 reverses the exponent order
  CHECK(ExactDistance::power(3) < ExactDistance::power(2));
  CHECK(ExactDistance::zero() < ExactDistance::power(5));
  CHECK(ExactDistance::power(1) <= ExactDistance::power(1));
  CHECK(ExactDistance::power(2) * ExactDistance::power(3) == ExactDistance::power(5));
  CHECK(ExactDistance::power(2) / ExactDistance::power(5) == ExactDistance::power(-3));
  CHECK_THROWS_AS(ExactDistance::power(1) / ExactDistance::zero(), ZeroDenominator);
  CHECK((ExactDistance::zero() * ExactDistance::power(4)).is_zero());

  CHECK(exact_distance_value(ExactDistance::power(-2), BigRational(1, 2)) == 4.0);
  CHECK(exact_distance_value(ExactDistance::zero(), BigRational(1, 2)) == 0.0);
  CHECK(exact_distance_rational(ExactDistance::power(2), BigRational(1, 3)) ==
        BigRational(1, 9));
}

TEST_CASE("identity to the flattened space preserves cross ratios exactly") {
  for (auto [k, depth] : {std::pair<unsigned, std::size_t>{2, 4}, {3, 3}}) {
    auto words = enumerate_words(k, depth);
    CHECK(rho_sigma_identity_mobius_exact(words, zero_word(depth)).preserved);
  }
}
