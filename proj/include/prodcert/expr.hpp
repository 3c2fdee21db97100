#pragma once

// Generator expressions: integer literals, the index variables n and m,
// + - * ^ (right-associative), unary minus, postfix ! and parentheses.
// Values stay exact big integers while they fit; beyond that they carry a
// sign and an enclosure of log2 |v|.

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>

#include "prodcert/ball.hpp"

namespace prodcert {

/// Working precision for log2 enclosures of huge values.
inline constexpr Precision kLogPrecision = 256;
/// Exact integers are kept up to this many bits.
inline constexpr unsigned long kExactBitLimit = 1ul << 26;

class Value {
 public:
  Value() = default;
  Value(const mpz_class& z);
  Value(long v) : Value(mpz_class(v)) {}
  /// A nonzero value known only through sign and log2 |v|.
  static Value huge(int sign, RealBall log2_abs);

  bool is_exact() const noexcept { return exact_.has_value(); }
  /// Requires is_exact().
  const mpz_class& exact() const;
  int sign() const noexcept { return sign_; }
  bool is_zero() const noexcept { return sign_ == 0; }
  /// Enclosure of log2 |v|; requires a nonzero value.
  RealBall log2_abs(Precision prec = kLogPrecision) const;
  /// Enclosure of v itself (may under or overflow to a wide ball).
  RealBall ball(Precision prec) const;
  /// Exact decimal when small, otherwise "2^(L)" with sign.
  std::string to_string() const;

 private:
  std::optional<mpz_class> exact_ = mpz_class(0);
  RealBall log2_;
  int sign_ = 0;
};

Value operator+(const Value& a, const Value& b);
Value operator-(const Value& a, const Value& b);
Value operator*(const Value& a, const Value& b);
Value operator-(const Value& a);
Value power(const Value& base, const Value& exponent);
Value factorial(const Value& a);

/// Three-way comparison; `certain` only when decided rigorously.
Certainty value_less(const Value& a, const Value& b);

class Expression {
 public:
  struct Node;

  /// Throws ExpressionError with the 1-based column of the offending token.
  static Expression parse(const std::string& text);

  Value eval(long n, long m = 0) const;
  const std::string& text() const noexcept { return text_; }
  bool uses_m() const noexcept { return uses_m_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
  bool uses_m_ = false;
};

/// "p/q", an integer, or a finite decimal such as "-0.125" or "1e-30".
mpq_class parse_rational(const std::string& text);

}  // namespace prodcert
