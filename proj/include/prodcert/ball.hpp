#pragma once

// Midpoint-radius enclosures on top of MPFR.
//
// A RealBall [m +/- r] stands for every real x with |x - m| <= r. Every
// operation returns a ball containing all results reachable from points of
// its inputs; midpoints are rounded to nearest and the rounding error is
// folded into the radius, radii are always rounded upward. A ComplexBall is
// a rectangle: independent real and imaginary balls.

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace prodcert {

using Precision = mpfr_prec_t;

inline constexpr Precision kRadiusPrecision = 64;
inline constexpr Precision kDefaultPrecision = 128;

/// Owning wrapper around mpfr_t. Value semantics; precision travels with
/// the value.
class Float {
 public:
  explicit Float(Precision prec = kRadiusPrecision);
  Float(const Float& other);
  Float(Float&& other) noexcept;
  Float& operator=(const Float& other);
  Float& operator=(Float&& other) noexcept;
  ~Float();

  static Float from_integer(const mpz_class& z, Precision prec,
                            mpfr_rnd_t rnd = MPFR_RNDN);
  static Float from_si(long v, Precision prec = kRadiusPrecision);
  static Float from_rational(const mpq_class& q, Precision prec,
                             mpfr_rnd_t rnd);
  static Float pow2(long exponent, Precision prec = kRadiusPrecision);
  static Float infinity(Precision prec = kRadiusPrecision);

  mpfr_ptr get() noexcept { return value_; }
  mpfr_srcptr get() const noexcept { return value_; }
  Precision precision() const noexcept { return mpfr_get_prec(value_); }

  bool is_zero() const noexcept { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const noexcept { return mpfr_number_p(value_) != 0; }
  bool is_inf() const noexcept { return mpfr_inf_p(value_) != 0; }
  int sign() const noexcept { return mpfr_sgn(value_); }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const;
  /// Exact conversion; the value must be finite.
  mpq_class to_rational() const;
  /// Scientific notation with `digits` significant digits.
  std::string to_string(int digits) const;

 private:
  mpfr_t value_;
};

int compare(const Float& a, const Float& b);

enum class Certainty { certain, refuted, unknown };

class RealBall {
 public:
  RealBall();
  explicit RealBall(Precision prec);
  RealBall(Float mid, Float rad);

  static RealBall from_si(long v, Precision prec = kDefaultPrecision);
  static RealBall from_integer(const mpz_class& z, Precision prec);
  static RealBall from_rational(const mpq_class& q, Precision prec);
  static RealBall from_endpoints(const Float& lo, const Float& hi,
                                 Precision prec);
  static RealBall whole(Precision prec);

  const Float& mid() const noexcept { return mid_; }
  const Float& rad() const noexcept { return rad_; }
  Precision precision() const noexcept { return mid_.precision(); }

  Float lower() const;
  Float upper() const;
  /// Upper bound of |x| over the ball.
  Float mag() const;
  /// Lower bound of |x| over the ball (zero if the ball contains zero).
  Float mig() const;

  bool is_exact() const noexcept { return rad_.is_zero(); }
  bool is_finite() const noexcept { return mid_.is_finite() && rad_.is_finite(); }
  bool contains_zero() const;
  bool contains(const mpq_class& q) const;
  bool contains(const RealBall& other) const;
  bool overlaps(const RealBall& other) const;
  bool certainly_positive() const;
  bool certainly_negative() const;
  bool certainly_nonnegative() const;
  bool certainly_nonpositive() const;

  RealBall with_precision(Precision prec) const;
  RealBall add_error(const Float& err) const;

  double to_double() const { return mid_.to_double(); }
  /// "m[+/-r]" with `digits` significant digits for the midpoint.
  std::string to_string(int digits = 20) const;

  RealBall operator-() const;
  RealBall& operator+=(const RealBall& other);
  RealBall& operator-=(const RealBall& other);
  RealBall& operator*=(const RealBall& other);
  RealBall& operator/=(const RealBall& other);

 private:
  Float mid_;
  Float rad_;
};

RealBall operator+(const RealBall& a, const RealBall& b);
RealBall operator-(const RealBall& a, const RealBall& b);
RealBall operator*(const RealBall& a, const RealBall& b);
RealBall operator/(const RealBall& a, const RealBall& b);

RealBall abs(const RealBall& x);
RealBall sqr(const RealBall& x);
/// Square root of the nonnegative part of x.
RealBall sqrt_nonneg(const RealBall& x);
RealBall exp(const RealBall& x);
RealBall exp2(const RealBall& x);
RealBall log(const RealBall& x);
RealBall log2(const RealBall& x);
/// base^e for base >= 0 (negative parts of the base ball are clipped).
RealBall pow(const RealBall& base, const RealBall& e);
RealBall pow_uint(const RealBall& base, unsigned long k);
RealBall max(const RealBall& a, const RealBall& b);
RealBall min(const RealBall& a, const RealBall& b);
RealBall hull(const RealBall& a, const RealBall& b);

Certainty less(const RealBall& a, const RealBall& b);
Certainty less_equal(const RealBall& a, const RealBall& b);

class ComplexBall {
 public:
  ComplexBall() = default;
  explicit ComplexBall(RealBall re);
  ComplexBall(RealBall re, RealBall im);

  static ComplexBall from_rationals(const mpq_class& re, const mpq_class& im,
                                    Precision prec);

  const RealBall& re() const noexcept { return re_; }
  const RealBall& im() const noexcept { return im_; }
  Precision precision() const noexcept;

  RealBall abs() const;
  /// Upper bound for the distance from the midpoint to any point inside.
  Float radius() const;
  bool contains_zero() const;
  bool overlaps(const ComplexBall& other) const;
  bool contains(const ComplexBall& other) const;
  bool is_real() const noexcept { return im_.is_exact() && im_.mid().is_zero(); }
  bool is_finite() const noexcept { return re_.is_finite() && im_.is_finite(); }

  ComplexBall conj() const;
  ComplexBall operator-() const;
  ComplexBall& operator+=(const ComplexBall& other);
  ComplexBall& operator*=(const ComplexBall& other);

  std::string to_string(int digits = 20) const;

 private:
  RealBall re_;
  RealBall im_;
};

ComplexBall operator+(const ComplexBall& a, const ComplexBall& b);
ComplexBall operator-(const ComplexBall& a, const ComplexBall& b);
ComplexBall operator*(const ComplexBall& a, const ComplexBall& b);
ComplexBall operator*(const ComplexBall& a, const RealBall& b);
ComplexBall operator/(const ComplexBall& a, const ComplexBall& b);
ComplexBall operator/(const ComplexBall& a, const RealBall& b);
ComplexBall pow_uint(const ComplexBall& base, unsigned long k);

}  // namespace prodcert
