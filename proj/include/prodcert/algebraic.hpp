#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prodcert/ball.hpp"
#include "prodcert/poly.hpp"

namespace prodcert {

inline constexpr int kDefaultDegreeCap = 24;

struct ComplexRational {
  mpq_class re;
  mpq_class im;
};

/// Closed axis-aligned square |Re z - Re c| <= h, |Im z - Im c| <= h.
struct RootRegion {
  ComplexRational center;
  mpq_class half_width;
};

/// An algebraic number: its minimal polynomial (primitive, irreducible,
/// positive leading coefficient) and a square holding exactly one of its
/// roots. Immutable once constructed.
class AlgebraicNumber {
 public:
  /// The number 0.
  AlgebraicNumber();

  static AlgebraicNumber from_rational(const mpq_class& q);
  static AlgebraicNumber from_integer(const mpz_class& z) { return from_rational(mpq_class(z)); }

  const IntPoly& minpoly() const noexcept { return minpoly_; }
  const RootRegion& selector() const noexcept { return region_; }
  int degree() const noexcept { return minpoly_.degree(); }
  bool is_integer() const { return minpoly_.is_monic(); }
  bool is_rational() const noexcept { return degree() == 1; }
  bool is_zero() const { return is_rational() && minpoly_.coeff(0) == 0; }
  /// Requires is_rational().
  mpq_class rational_value() const;

  std::string to_string() const;

 private:
  AlgebraicNumber(IntPoly minpoly, RootRegion region);
  friend AlgebraicNumber from_isolated(IntPoly minpoly, RootRegion region);

  IntPoly minpoly_;
  RootRegion region_;
};

/// Validates irreducibility and isolation.
AlgebraicNumber make_algebraic(const IntPoly& minpoly, const RootRegion& selector);
/// The root of an irreducible polynomial closest to `hint`.
AlgebraicNumber select_nearest(const IntPoly& minpoly, const ComplexRational& hint);

ComplexBall approximate(const AlgebraicNumber& alpha, Precision prec);
std::vector<ComplexBall> conjugate_enclosures(const AlgebraicNumber& alpha, Precision prec);

/// True iff both denote the same complex number.
bool same_number(const AlgebraicNumber& a, const AlgebraicNumber& b);

enum class ArithOp { sum, product, reciprocal };

AlgebraicNumber arith(ArithOp op, const AlgebraicNumber& a,
                      const std::optional<AlgebraicNumber>& b = std::nullopt,
                      int degree_cap = kDefaultDegreeCap);
AlgebraicNumber negate(const AlgebraicNumber& a);
AlgebraicNumber scale(const AlgebraicNumber& a, const mpz_class& c);

/// [Q(tower, alpha) : Q(tower)].
int degree_over(const AlgebraicNumber& alpha, const std::vector<AlgebraicNumber>& tower,
                int degree_cap = kDefaultDegreeCap);

/// A primitive element of Q(tower), or nothing when the tower generates Q.
std::optional<AlgebraicNumber> primitive_element(const std::vector<AlgebraicNumber>& tower,
                                                 int degree_cap = kDefaultDegreeCap);

}  // namespace prodcert
