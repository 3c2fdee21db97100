#include "doctest.h"
#include "prodcert/ball.hpp"

#include <random>

using namespace prodcert;

namespace {

RealBall q(long p, long r, Precision prec = 128) {
  return RealBall::from_rational(mpq_class(p, r), prec);
}

}  // namespace

TEST_CASE("exact integers stay exact") {
  RealBall a = RealBall::from_si(5);
  RealBall b = RealBall::from_si(7);
  CHECK((a * b).is_exact());
  CHECK((a + b).contains(mpq_class(12)));
  CHECK((a - b).contains(mpq_class(-2)));
  CHECK(exp2(RealBall::from_si(2)).is_exact());
  CHECK(exp2(RealBall::from_si(2)).contains(mpq_class(4)));
  CHECK(log2(RealBall::from_si(1024)).contains(mpq_class(10)));
  CHECK(log2(RealBall::from_si(1024)).is_exact());
}

TEST_CASE("rounded rationals keep the true value") {
  RealBall third = q(1, 3);
  CHECK_FALSE(third.is_exact());
  CHECK(third.contains(mpq_class(1, 3)));
  RealBall sum = third + third + third;
  CHECK(sum.contains(mpq_class(1)));
  RealBall quot = RealBall::from_si(1) / RealBall::from_si(3);
  CHECK(quot.contains(mpq_class(1, 3)));
}

TEST_CASE("division by a ball containing zero is the whole line") {
  RealBall z = RealBall::from_endpoints(Float::from_si(-1), Float::from_si(1), 64);
  CHECK_FALSE((RealBall::from_si(1) / z).is_finite());
}

TEST_CASE("comparisons are tri-state") {
  CHECK(less(q(1, 3), q(1, 2)) == Certainty::certain);
  CHECK(less(q(1, 2), q(1, 3)) == Certainty::refuted);
  CHECK(less(RealBall::from_si(4), RealBall::from_si(4)) == Certainty::refuted);
  CHECK(less_equal(RealBall::from_si(4), RealBall::from_si(4)) == Certainty::certain);
  RealBall fuzzy = q(1, 2).add_error(Float::pow2(-10));
  CHECK(less(fuzzy, q(1, 2)) == Certainty::unknown);
}

TEST_CASE("sqrt, exp, log enclose the true values") {
  RealBall two = RealBall::from_si(2, 256);
  RealBall s = sqrt_nonneg(two);
  CHECK(sqr(s).contains(mpq_class(2)));
  CHECK(s.rad().to_double() < 1e-70);
  RealBall back = log(exp(q(3, 7, 256)));
  CHECK(back.contains(mpq_class(3, 7)));
  RealBall p = pow(RealBall::from_si(8, 128), q(1, 3));
  CHECK(p.contains(mpq_class(2)));
}

TEST_CASE("random expression enclosures contain the rational value") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<long> num(-1000, 1000);
  std::uniform_int_distribution<long> den(1, 997);
  for (int trial = 0; trial < 500; ++trial) {
    mpq_class exact(num(rng), den(rng));
    exact.canonicalize();
    RealBall acc = RealBall::from_rational(exact, 80);
    for (int step = 0; step < 6; ++step) {
      mpq_class x(num(rng), den(rng));
      x.canonicalize();
      RealBall bx = RealBall::from_rational(x, 80);
      switch (step % 3) {
        case 0: exact += x; acc += bx; break;
        case 1: exact *= x; acc *= bx; break;
        case 2:
          if (x != 0) { exact /= x; acc /= bx; }
          break;
      }
    }
    REQUIRE(acc.contains(exact));
  }
}

TEST_CASE("complex balls") {
  ComplexBall i(RealBall::from_si(0), RealBall::from_si(1));
  ComplexBall m = i * i;
  CHECK(m.re().contains(mpq_class(-1)));
  CHECK(m.im().contains(mpq_class(0)));
  ComplexBall z(q(3, 1), q(4, 1));
  CHECK(z.abs().contains(mpq_class(5)));
  ComplexBall w = z / z;
  CHECK(w.re().contains(mpq_class(1)));
  CHECK(w.im().contains(mpq_class(0)));
  ComplexBall p = pow_uint(ComplexBall(RealBall::from_si(1), RealBall::from_si(1)), 8);
  CHECK(p.re().contains(mpq_class(16)));
  CHECK(p.im().contains(mpq_class(0)));
}

TEST_CASE("huge exponents are representable") {
  RealBall big = exp2(RealBall::from_si(1L << 40, 64));
  CHECK(big.is_finite());
  CHECK(log2(big).contains(mpq_class(1L << 40)));
}
