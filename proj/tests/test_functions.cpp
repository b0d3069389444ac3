#include <doctest.h>

#include <random>

#include "support.hpp"
#include "thickset/errors.hpp"
#include "thickset/functions.hpp"

using namespace thickset;
using namespace thickset::testing;

namespace {
const FunctionSpec kIdentity = FunctionSpec::identity();
const FunctionSpec kQuad = FunctionSpec::parse("1,1/10");  // t + t^2/10
const FunctionSpec kSquare = FunctionSpec::parse("0,1");   // t^2
}  // namespace

TEST_CASE("function specs") {
  CHECK(eval(kIdentity, R(1, 3)) == R(1, 3));
  CHECK(eval(kQuad, R(1, 2)) == R(21, 40));
  CHECK(eval(kQuad, 0) == 0);
  CHECK(kQuad.str() == "1,1/10");
  CHECK(FunctionSpec::parse(" 2 , -1/3 ").coefficients() == std::vector<Rational>{2, R(-1, 3)});
  CHECK_THROWS_AS(FunctionSpec::parse(""), ParseError);
  CHECK_THROWS_AS(FunctionSpec::parse("1,,2"), ParseError);
  CHECK_THROWS_AS(FunctionSpec::parse("1,x"), ParseError);
  CHECK_THROWS_AS(FunctionSpec::parse("1,1,1,1,1,1,1,1,1"), DomainError);
}

TEST_CASE("derivatives") {
  CHECK(derivative(kIdentity) == Polynomial({1}));
  CHECK(derivative(kSquare) == Polynomial({0, 2}));
  CHECK(kSquare.slope_at_zero() == 0);
  CHECK(derivative(kQuad) == Polynomial({1, R(1, 5)}));
}

TEST_CASE("derivative windows") {
  auto w = derivative_window(2);
  CHECK(w.lower == R(2, 3));
  CHECK(w.upper == R(3, 2));
  w = derivative_window(R(3, 2));
  CHECK(w.lower == R(2, 3));
  CHECK(w.upper == R(3, 2));
  CHECK_THROWS_AS(derivative_window(1), DomainError);
  CHECK_THROWS_AS(derivative_window(R(1, 2)), DomainError);
  CHECK_FALSE(derivative_window(2).contains(R(2, 3)));  // open at both ends
  CHECK_FALSE(derivative_window(2).contains(R(3, 2)));
}

TEST_CASE("property: the window always contains 1") {
  for (long n = 101; n <= 2000; n += 37) {
    const Rational tau(n, 100);
    const auto w = derivative_window(tau);
    CHECK(w.lower < 1);
    CHECK(1 < w.upper);
    // the four candidate bounds, by brute comparison
    CHECK(w.lower == max(tau / (tau + 1), tau.reciprocal()));
    CHECK(w.upper == min(tau, 1 + tau.reciprocal()));
  }
}

TEST_CASE("monotone inverse") {
  const Rational prec = Rational::pow2(-40);
  auto v = monotone_inverse(kIdentity, R(1, 4), {0, 1}, prec);
  CHECK(v.contains(R(1, 4)));
  CHECK(v.width() <= prec);
  v = monotone_inverse(FunctionSpec::parse("1,1"), 2, {0, 2}, prec);
  CHECK(v.contains(1));
  v = monotone_inverse(kQuad, R(21, 40), {0, 1}, prec);
  CHECK(v.contains(R(1, 2)));
  CHECK(v.width() <= prec);
  CHECK_THROWS_AS(monotone_inverse(kQuad, 5, {0, 1}, prec), RangeError);
  CHECK_THROWS_AS(monotone_inverse(kSquare, R(1, 4), {-1, 1}, prec), DomainError);
  // decreasing branch
  v = monotone_inverse(FunctionSpec::parse("-1"), R(-1, 3), {0, 1}, prec);
  CHECK(v.contains(R(1, 3)));
}

TEST_CASE("derivative ratio bounds") {
  CHECK(derivative_ratio_bound(kIdentity, {-5, 5}) == 0);
  const Rational b = derivative_ratio_bound(kQuad, {0, R(1, 10)});
  CHECK(b >= R(1, 50));  // sup is exactly 1/50
  CHECK(b < R(1, 40));
  CHECK_THROWS_AS(derivative_ratio_bound(kSquare, {R(-1, 10), R(1, 10)}), DomainError);
  CHECK_THROWS_AS(derivative_ratio_bound(kSquare, {0, R(1, 10)}), DomainError);
}

TEST_CASE("derivative range is exact for monotone derivatives") {
  const auto r = derivative_range(kQuad, {0, R(1, 10)});
  CHECK(r.lo == 1);
  CHECK(r.hi == R(51, 50));
  // interior extremum: f'(t) = 1 - 3 t^2 peaks at 0
  const auto c = derivative_range(FunctionSpec::parse("1,0,-1"), {R(-1, 2), R(1, 2)});
  CHECK(c.lo <= R(1, 4));
  CHECK(c.hi >= 1);
  CHECK(c.hi - 1 < Rational::pow2(-40));
}

TEST_CASE("property: derivative agrees with central differences") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Rational> coeffs;
    const std::size_t deg = 1 + rng() % 5;
    for (std::size_t k = 0; k < deg; ++k) coeffs.push_back(random_rational(rng, -3, 3, 5));
    if (coeffs.back().is_zero()) coeffs.back() = 1;
    const FunctionSpec f(coeffs);
    const Rational x = random_rational(rng, -2, 2, 97);
    const Rational h(1, 1000);
    const Rational fd = (eval(f, x + h) - eval(f, x - h)) / (2 * h);
    // truncation error is h^2/6 * sup|f'''| over [x-h, x+h]; bound it crudely
    Rational third = 0;
    const Polynomial d3 = f.polynomial().derivative().derivative().derivative();
    const auto range = d3.enclose({x - h, x + h});
    third = max(range.lo.abs(), range.hi.abs());
    CHECK((fd - derivative(f)(x)).abs() <= h * h * third / 6);
  }
}

TEST_CASE("property: inverse then evaluate contains y") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 300; ++trial) {
    const Rational c1 = random_rational(rng, 1, 3, 7);
    const Rational c2 = random_rational(rng, -1, 1, 11);
    const FunctionSpec f({c1, c2});
    // keep the bracket inside the region where f' = c1 + 2 c2 t > 0
    const Rational radius = c2.is_zero() ? Rational(1) : min(Rational(1), c1 / (4 * c2.abs()));
    const ClosedInterval bracket{-radius, radius};
    const Rational t = random_rational(rng, -1, 1, 1000) * radius;
    const Rational y = eval(f, t);
    const auto enc = monotone_inverse(f, y, bracket, Rational::pow2(-50));
    CHECK(enc.contains(t));
    const auto back = f.polynomial().enclose(enc.interval());
    CHECK(back.contains(y));
  }
}

TEST_CASE("property: ratio bound never grows as the window shrinks") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const FunctionSpec f({1, random_rational(rng, -1, 1, 9), random_rational(rng, -1, 1, 9)});
    Rational prev = derivative_ratio_bound(f, {R(-1, 4), R(1, 4)});
    for (int k = 3; k <= 20; ++k) {
      const Rational r = Rational::pow2(-k);
      const Rational b = derivative_ratio_bound(f, {-r, r});
      CHECK(b <= prev);
      prev = b;
    }
  }
}

TEST_CASE("monotone maps") {
  const auto fwd = MonotoneMap::forward(kQuad);
  CHECK(fwd.enclose(R(1, 2)) == CertifiedValue::exact(R(21, 40)));
  const auto inv = MonotoneMap::inverse(kQuad, {-1, 1}, Rational::pow2(-50));
  CHECK(inv.enclose(R(21, 40)).contains(R(1, 2)));
  CHECK(inv.enclose(R(21, 40), {0, 1}).contains(R(1, 2)));
  const auto d = inv.derivative_bounds({0, R(1, 10)});
  CHECK(d.hi <= 1);
  CHECK(d.lo >= R(50, 51) - Rational::pow2(-30));
  CHECK_THROWS_AS(MonotoneMap::inverse(kSquare, {-1, 1}, Rational::pow2(-50)), DomainError);
}

TEST_CASE("sturm counts") {
  const Polynomial p({-2, 0, 1});  // x^2 - 2
  const SturmSequence s(p);
  CHECK(s.count(-2, 2) == 2);
  CHECK(s.count(0, 2) == 1);
  CHECK(s.count_closed(R(3, 2), 2) == 0);
  const auto roots = isolate_real_roots(p, Rational::pow2(-20));
  REQUIRE(roots.size() == 2);
  CHECK(roots[1].lo * roots[1].lo <= 2);
  CHECK(roots[1].hi * roots[1].hi >= 2);
}
