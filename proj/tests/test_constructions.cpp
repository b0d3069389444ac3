#include <doctest.h>

#include <random>

#include "support.hpp"
#include "thickset/errors.hpp"
#include "thickset/family.hpp"

using namespace thickset;
using namespace thickset::testing;

TEST_CASE("middle-alpha stages") {
  CHECK(middle_alpha(R(1, 3), 1).intervals() == std::vector<ClosedInterval>{{0, R(1, 3)}, {R(2, 3), 1}});
  const auto s2 = middle_alpha(R(1, 3), 2);
  CHECK(s2.size() == 4);
  for (const auto& iv : s2.intervals()) CHECK(iv.length() == R(1, 9));
  CHECK(middle_alpha(R(1, 3), 0).intervals() == std::vector<ClosedInterval>{{0, 1}});
  CHECK_THROWS_AS(middle_alpha(0, 2), DomainError);
  CHECK_THROWS_AS(middle_alpha(1, 2), DomainError);
  CHECK_THROWS_AS(middle_alpha(R(-1, 2), 2), DomainError);
}

TEST_CASE("middle-alpha thickness is depth invariant") {
  for (const Rational& alpha : {R(1, 3), R(1, 5), R(1, 2), R(1, 7), R(2, 3)}) {
    const Rational expected = (1 - alpha) / (2 * alpha);
    for (std::size_t d = 1; d <= 7; ++d) CHECK(thickness(middle_alpha(alpha, d)).value == expected);
  }
}

TEST_CASE("middle-alpha family nodes match the materialised stage") {
  const auto fam = middle_alpha_family(R(1, 5));
  const auto nodes = fam->nodes(4);
  const auto stage = middle_alpha(R(1, 5), 4);
  REQUIRE(nodes.size() == stage.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) CHECK(nodes[i].interval == stage.intervals()[i]);
}

TEST_CASE("random thick stages") {
  SUBCASE("target 3/2, depth 6, seed 42") {
    const auto s = random_thick({R(3, 2), 6, 42});
    CHECK(thickness(s).value >= R(3, 2));
    CHECK(s.size() == 64);
  }
  SUBCASE("depth 0 is the unit interval") {
    CHECK(random_thick({2, 0, 1}).intervals() == std::vector<ClosedInterval>{{0, 1}});
  }
  SUBCASE("determinism") {
    CHECK(random_thick({2, 7, 99}) == random_thick({2, 7, 99}));
    CHECK_FALSE(random_thick({2, 7, 99}) == random_thick({2, 7, 100}));
  }
  SUBCASE("spread 0 is the middle-alpha set") {
    RandomThickSpec spec{2, 5, 3, 0};
    CHECK(random_thick(spec) == middle_alpha(R(1, 5), 5));
  }
  SUBCASE("subtrees expand independently") {
    const auto fam = random_thick_family({R(3, 2), 0, 5});
    const auto full = fam->nodes(3);
    std::vector<FamilyNode> level = fam->roots();
    for (int k = 0; k < 3; ++k) {
      std::vector<FamilyNode> next;
      for (const auto& n : level) {
        auto kids = fam->children(n);
        next.insert(next.end(), kids.begin(), kids.end());
      }
      level = std::move(next);
    }
    REQUIRE(level.size() == full.size());
    for (std::size_t i = 0; i < level.size(); ++i) CHECK(level[i].interval == full[i].interval);
  }
  CHECK_THROWS_AS(random_thick({0, 3, 1}), DomainError);
  CHECK_THROWS_AS(random_thick({2, 3, 1, 1}), DomainError);
}

TEST_CASE("property: random thick stages meet their target at every level") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    RandomThickSpec spec;
    spec.target_tau = std::vector<Rational>{R(1, 2), 1, R(3, 2), 2, 3, 5}[rng() % 6];
    spec.depth = 1 + rng() % 7;
    spec.seed = rng();
    spec.gap_spread = Rational(static_cast<long>(rng() % 10), 10);
    const auto s = random_thick(spec);
    for (const auto& st : s.lineage()) {
      if (st->depth() > 0) CHECK(thickness(*st).value >= spec.target_tau);
    }
  }
}

TEST_CASE("counterexample parameters") {
  const auto p = CounterexampleParams::make(1, R(1, 1000), R(9, 10));
  CHECK(p.alpha == R(1, 3));
  CHECK(p.beta == R(1, 3));
  CHECK_THROWS_AS(CounterexampleParams::make(R(1, 2), R(1, 1000), R(9, 10)), DomainError);
  CHECK_THROWS_AS(CounterexampleParams::make(2, 0, R(9, 10)), DomainError);
  CHECK_THROWS_AS(CounterexampleParams::make(2, R(1, 10), 1), DomainError);
}

TEST_CASE("counterexample limiting lengths for tau = 1") {
  const Rational eps(1, 1000);
  const Rational e2 = eps * eps;
  std::array<Rational, 3> cs{R(9, 10), R(99, 100), R(999, 1000)};
  std::array<Rational, 3> g3, g4, i5;
  for (std::size_t k = 0; k < 3; ++k) {
    const auto parts = counterexample_parts(CounterexampleParams::make(1, eps, cs[k]));
    const auto& I = parts.intervals;
    const auto G = parts.gaps();
    CHECK(I[0].length() == eps / 3);
    CHECK(G[0].length() == eps / 3);
    CHECK(I[1].length() == eps / 3);
    CHECK(G[1].length() == eps);
    g3[k] = G[2].length();
    g4[k] = G[3].length();
    i5[k] = I[4].length();
  }
  // monotone approach to 7/9, 11/9 (in units of eps^2) and eps - 4 eps^2
  for (std::size_t k = 0; k + 1 < 3; ++k) {
    CHECK((g3[k + 1] - 7 * e2 / 9).abs() < (g3[k] - 7 * e2 / 9).abs());
    CHECK((g4[k + 1] - 11 * e2 / 9).abs() < (g4[k] - 11 * e2 / 9).abs());
    CHECK((i5[k + 1] - (eps - 4 * e2)).abs() < (i5[k] - (eps - 4 * e2)).abs());
  }
}

TEST_CASE("counterexample construction errors") {
  CHECK_THROWS_AS(counterexample_parts(CounterexampleParams::make(R(101, 100), R(1, 2), R(9, 10))), ConstructionError);
}

TEST_CASE("calibration") {
  const auto p = counterexample_calibrate(R(101, 100), R(1, 1000), R(1, 1000000));
  const auto t = thickness(counterexample_set(p)).value;
  CHECK(t <= R(101, 100));
  CHECK(t >= R(101, 100) - R(1, 1000000));
  CHECK(p.c < 1);
  CHECK_THROWS_AS(counterexample_calibrate(1, R(1, 1000), R(1, 1000000)), DomainError);
  CHECK_THROWS_AS(counterexample_calibrate(10, R(1, 1000), R(1, 1000000)), CalibrationFailure);
}
