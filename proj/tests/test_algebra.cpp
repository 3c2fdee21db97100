#include "doctest.h"
#include "prodcert/algebraic.hpp"
#include "prodcert/error.hpp"
#include "prodcert/factor.hpp"
#include "prodcert/roots.hpp"

#include <random>

using namespace prodcert;

namespace {

IntPoly P(std::initializer_list<long> c) { return IntPoly(c); }

RootRegion near(double re, double im, double h) {
  return RootRegion{{mpq_class(re), mpq_class(im)}, mpq_class(h)};
}

// Bisection on a sign change of f over [lo, hi], exact rational arithmetic.
mpq_class bisect(const IntPoly& f, mpq_class lo, mpq_class hi, int steps) {
  const int sign_lo = sgn(f(lo));
  for (int i = 0; i < steps; ++i) {
    mpq_class mid = (lo + hi) / 2;
    if (sgn(f(mid)) == sign_lo) lo = mid;
    else hi = mid;
  }
  return (lo + hi) / 2;
}

}  // namespace

TEST_CASE("polynomial arithmetic and gcd") {
  IntPoly a = P({-2, 0, 1});
  IntPoly b = P({-3, 0, 1});
  CHECK((a * b) == P({6, 0, -5, 0, 1}));
  CHECK(gcd(a * b, a * P({1, 1})) == a);
  IntPoly q;
  CHECK(divide_exact(a * b, b, q));
  CHECK(q == a);
  CHECK_FALSE(divide_exact(a, P({0, 2}), q));
  CHECK(squarefree_part(P({1, 1}) * P({1, 1}) * P({-2, 1})) == P({-2, -1, 1}));
  CHECK(P({-2, 0, 1}).to_string() == "x^2-2");
}

TEST_CASE("resultants against hand values") {
  // Res(x^2 - 2, x - 1) = f(1) = -1.
  CHECK(resultant(P({-2, 0, 1}), P({-1, 1})) == -1);
  // Res(x^2+1, x^2-2) = prod over +-i of (i^2 - 2) = 9.
  CHECK(resultant(P({1, 0, 1}), P({-2, 0, 1})) == 9);
  CHECK(discriminant(P({-2, 0, 1})) == 8);
  CHECK(discriminant(P({-1, -1, 1})) == 5);
}

TEST_CASE("annihilators") {
  CHECK(annihilator_sum(P({-2, 0, 1}), P({-3, 0, 1})) == P({1, 0, -10, 0, 1}));
  CHECK(annihilator_product(P({-2, 0, 1}), P({-3, 0, 1})) == P({36, 0, -12, 0, 1}));
  CHECK(annihilator_reciprocal(P({-1, 5})) == P({5, -1}));
  CHECK(annihilator_scale(P({-2, 0, 1}), 3) == P({-18, 0, 1}));
}

TEST_CASE("factorization matches an independent CAS") {
  struct Case {
    IntPoly f;
    std::vector<IntPoly> factors;
  };
  const std::vector<Case> cases = {
      {P({1, 0, -10, 0, 1}), {P({1, 0, -10, 0, 1})}},
      {P({6, 0, -5, 0, 1}), {P({-3, 0, 1}), P({-2, 0, 1})}},
      {P({-1, 0, 0, 0, 0, 0, 0, 0, 1}), {P({-1, 1}), P({1, 1}), P({1, 0, 1}), P({1, 0, 0, 0, 1})}},
      {P({2, -4, -6, -1, 2, 5, -6, 0, -1, 3}), {P({-1, 3}), P({1, 1, 1}), P({1, 0, -1, 1}), P({-2, 0, 0, 1})}},
      {P({1, 1, 1, 1, 1, 1, 1}), {P({1, 1, 1, 1, 1, 1, 1})}},
      {P({1, 0, 0, 0, -98, 0, 0, 0, 1}), {P({1, 0, -10, 0, 1}), P({1, 0, 10, 0, 1})}},
      {P({-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}),
       {P({-1, 1}), P({1, 1}), P({1, -1, 1}), P({1, 0, 1}), P({1, 1, 1}), P({1, 0, -1, 0, 1})}},
      {P({-4, 8, -1, -5, 1, 1}), {P({2, 1}), P({-1, 1})}},
      {P({33, -21, 22, 1, 0, 10}), {P({3, 0, 2}), P({11, -7, 0, 5})}},
      {P({576, 0, -960, 0, 352, 0, -40, 0, 1}), {P({576, 0, -960, 0, 352, 0, -40, 0, 1})}},
  };
  for (const auto& c : cases) {
    auto got = irreducible_factors(c.f);
    auto want = c.factors;
    std::sort(want.begin(), want.end());
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);
  }
  CHECK(is_irreducible(P({-2, 0, 1})));
  CHECK_FALSE(is_irreducible(P({-4, 0, 1})));
  CHECK_FALSE(is_irreducible(P({0, 0, 1})));
}

TEST_CASE("random products factor back into their parts") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> coef(-9, 9);
  for (int trial = 0; trial < 40; ++trial) {
    IntPoly a({coef(rng), coef(rng), coef(rng), 1});
    IntPoly b({coef(rng), coef(rng), 1});
    if (a.coeff(0) == 0 || b.coeff(0) == 0) continue;
    IntPoly f = a * b;
    IntPoly prod = IntPoly::constant(1);
    for (const auto& g : irreducible_factors(f)) {
      CHECK(is_irreducible(g));
      IntPoly q;
      CHECK(divide_exact(f, g, q));
      prod = prod * g;
    }
    // Distinct factors of a squarefree product multiply back to it.
    if (squarefree_part(f) == f) CHECK(prod == f);
  }
}

TEST_CASE("root isolation") {
  auto r = isolate_roots(P({-2, 0, 0, 1}), 128);
  REQUIRE(r.size() == 3);
  int real = 0;
  for (const auto& z : r) {
    CHECK(z.abs().overlaps(pow(RealBall::from_si(2, 128), RealBall::from_rational(mpq_class(1, 3), 128))));
    if (z.is_real()) ++real;
  }
  CHECK(real == 1);
  auto i = isolate_roots(P({1, 0, 1}), 64);
  REQUIRE(i.size() == 2);
  for (const auto& z : i) {
    CHECK(z.re().is_exact());
    CHECK(z.re().mid().is_zero());
  }
  // Product of roots is (-1)^d c0 / cd.
  auto s = isolate_roots(P({3, -1, 4, 0, 1, 5}), 128);
  ComplexBall prod(RealBall::from_si(1, 128));
  for (const auto& z : s) prod = prod * z;
  CHECK(prod.re().contains(mpq_class(-3, 5)));
}

TEST_CASE("make_algebraic and approximate") {
  auto five = make_algebraic(P({-5, 1}), near(5, 0, 1));
  CHECK(five.degree() == 1);
  CHECK(approximate(five, 64).re().is_exact());
  auto sqrt2 = make_algebraic(P({-2, 0, 1}), near(1.4, 0, 0.25));
  CHECK(sqrt2.degree() == 2);
  ComplexBall z = approximate(sqrt2, 64);
  mpq_class oracle = bisect(P({-2, 0, 1}), 1, 2, 300);
  CHECK(z.re().contains(oracle) == true);
  CHECK(z.re().rad().to_double() <= std::ldexp(1.0, -60));
  auto phi = make_algebraic(P({-1, -1, 1}), near(1.6, 0, 0.25));
  mpq_class phi_oracle = bisect(P({-1, -1, 1}), 1, 2, 80);
  CHECK(std::abs(approximate(phi, 64).re().to_double() - phi_oracle.get_d()) < 1e-15);
  CHECK_THROWS_AS(make_algebraic(P({-4, 0, 1}), near(2, 0, 1)), Error);
  try {
    make_algebraic(P({-4, 0, 1}), near(2, 0, 1));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Reducible);
  }
  try {
    make_algebraic(P({-2, 0, 1}), near(0, 0, 2));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AmbiguousSelector);
  }
  // Higher precision balls intersect lower precision ones.
  ComplexBall lo = approximate(phi, 32);
  ComplexBall hi = approximate(phi, 512);
  CHECK(lo.overlaps(hi));
  CHECK(hi.re().rad().to_double() < 1e-150);
}

TEST_CASE("conjugate enclosures") {
  auto sqrt2 = make_algebraic(P({-2, 0, 1}), near(1.4, 0, 0.25));
  auto c = conjugate_enclosures(sqrt2, 64);
  REQUIRE(c.size() == 2);
  CHECK_FALSE(c[0].overlaps(c[1]));
  auto rat = conjugate_enclosures(AlgebraicNumber::from_integer(3), 64);
  REQUIRE(rat.size() == 1);
  CHECK(rat[0].re().is_exact());
}

TEST_CASE("arith") {
  auto sqrt2 = make_algebraic(P({-2, 0, 1}), near(1.4, 0, 0.25));
  auto msqrt2 = make_algebraic(P({-2, 0, 1}), near(-1.4, 0, 0.25));
  auto sqrt3 = make_algebraic(P({-3, 0, 1}), near(1.7, 0, 0.25));
  auto zero = arith(ArithOp::sum, sqrt2, msqrt2);
  CHECK(zero.is_zero());
  auto two = arith(ArithOp::product, sqrt2, sqrt2);
  CHECK(two.is_rational());
  CHECK(two.rational_value() == 2);
  auto s = arith(ArithOp::sum, sqrt2, sqrt3);
  CHECK(s.minpoly() == P({1, 0, -10, 0, 1}));
  CHECK(std::abs(approximate(s, 64).re().to_double() - 3.1462643699419726) < 1e-12);
  auto r = arith(ArithOp::reciprocal, sqrt2);
  CHECK(r.minpoly() == P({-1, 0, 2}));
  CHECK(approximate(r, 64).re().certainly_positive());
  try {
    arith(ArithOp::reciprocal, AlgebraicNumber());
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroReciprocal);
  }
  auto i = make_algebraic(P({1, 0, 1}), near(0, 1, 0.5));
  auto ii = arith(ArithOp::product, i, i);
  CHECK(ii.rational_value() == -1);
  CHECK(same_number(negate(msqrt2), sqrt2));
  CHECK_FALSE(same_number(msqrt2, sqrt2));
}

TEST_CASE("enclosure soundness over random expression trees") {
  std::vector<AlgebraicNumber> pool = {
      make_algebraic(P({-2, 0, 1}), near(1.4, 0, 0.25)),
      make_algebraic(P({-3, 0, 1}), near(-1.7, 0, 0.25)),
      make_algebraic(P({1, 0, 1}), near(0, 1, 0.5)),
      make_algebraic(P({-1, -1, 1}), near(1.6, 0, 0.25)),
      AlgebraicNumber::from_rational(mpq_class(2, 3)),
  };
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto& a = pool[rng() % pool.size()];
    const auto& b = pool[rng() % pool.size()];
    const bool sum = rng() % 2 == 0;
    if (a.degree() * b.degree() > 8) continue;
    auto exact = arith(sum ? ArithOp::sum : ArithOp::product, a, b);
    for (Precision p : {64, 200}) {
      ComplexBall numeric = sum ? approximate(a, p) + approximate(b, p) : approximate(a, p) * approximate(b, p);
      CHECK(approximate(exact, p).overlaps(numeric));
    }
  }
}

TEST_CASE("degree over a tower") {
  auto sqrt2 = make_algebraic(P({-2, 0, 1}), near(1.4, 0, 0.25));
  auto sqrt3 = make_algebraic(P({-3, 0, 1}), near(1.7, 0, 0.25));
  auto sqrt6 = make_algebraic(P({-6, 0, 1}), near(2.4, 0, 0.25));
  CHECK(degree_over(sqrt2, {}) == 2);
  CHECK(degree_over(sqrt2, {sqrt2}) == 1);
  CHECK(degree_over(sqrt3, {sqrt2}) == 2);
  CHECK(degree_over(sqrt6, {sqrt2, sqrt3}) == 1);
  auto cbrt2 = make_algebraic(P({-2, 0, 0, 1}), near(1.26, 0, 0.1));
  CHECK(degree_over(cbrt2, {sqrt2}) == 3);
  CHECK(degree_over(AlgebraicNumber::from_integer(4), {sqrt2}) == 1);
  try {
    degree_over(cbrt2, {sqrt2, sqrt3, cbrt2, make_algebraic(P({-5, 0, 1}), near(2.2, 0, 0.1))}, 12);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegreeCapExceeded);
  }
}
