#pragma once

// Dense univariate polynomials over Z, coefficients lowest degree first.

#include <gmpxx.h>

#include <initializer_list>
#include <string>
#include <vector>

#include "prodcert/ball.hpp"

namespace prodcert {

class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<mpz_class> coefficients);
  IntPoly(std::initializer_list<long> coefficients);

  static IntPoly monomial(const mpz_class& coeff, std::size_t degree);
  static IntPoly constant(const mpz_class& value) { return monomial(value, 0); }

  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<mpz_class>& coefficients() const noexcept { return c_; }
  /// Zero beyond the degree.
  mpz_class coeff(std::size_t i) const;
  const mpz_class& leading() const;
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  mpz_class content() const;
  /// Primitive part with a positive leading coefficient.
  IntPoly primitive_part() const;
  IntPoly derivative() const;
  /// x^deg p(1/x).
  IntPoly reversed() const;
  /// p(-x).
  IntPoly reflected() const;
  /// Parity under x -> -x: +1 even, -1 odd, 0 neither.
  int parity() const;

  mpz_class operator()(const mpz_class& x) const;
  mpq_class operator()(const mpq_class& x) const;
  ComplexBall operator()(const ComplexBall& x) const;
  RealBall operator()(const RealBall& x) const;

  /// Max-norm bit length (sizeinbase 2 of the largest coefficient).
  std::size_t height_bits() const;
  std::string to_string() const;

  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }
  friend bool operator<(const IntPoly& a, const IntPoly& b);

 private:
  void normalize();
  std::vector<mpz_class> c_;
};

IntPoly operator+(const IntPoly& a, const IntPoly& b);
IntPoly operator-(const IntPoly& a, const IntPoly& b);
IntPoly operator*(const IntPoly& a, const IntPoly& b);
IntPoly operator*(const mpz_class& s, const IntPoly& a);

/// Exact quotient a / b over Z; false if b does not divide a in Z[x].
bool divide_exact(const IntPoly& a, const IntPoly& b, IntPoly& quotient);
/// Primitive gcd with positive leading coefficient; gcd(0, 0) = 0.
IntPoly gcd(const IntPoly& a, const IntPoly& b);
/// Primitive part of a / gcd(a, a').
IntPoly squarefree_part(const IntPoly& a);
mpz_class resultant(const IntPoly& a, const IntPoly& b);
mpz_class discriminant(const IntPoly& a);

/// Polynomials vanishing at alpha + beta, alpha * beta, 1 / alpha and c * alpha
/// whenever f(alpha) = 0 and g(beta) = 0. Not reduced.
IntPoly annihilator_sum(const IntPoly& f, const IntPoly& g);
IntPoly annihilator_product(const IntPoly& f, const IntPoly& g);
IntPoly annihilator_reciprocal(const IntPoly& f);
IntPoly annihilator_scale(const IntPoly& f, const mpz_class& c);

/// Interpolating polynomial through (x_i, y_i); throws when the result is not
/// integral.
IntPoly interpolate(const std::vector<mpz_class>& xs, const std::vector<mpz_class>& ys);

}  // namespace prodcert
