#pragma once

#include <string>
#include <vector>

#include "prodcert/algebraic.hpp"
#include "prodcert/verdict.hpp"

namespace prodcert {

struct HeightReport {
  RealBall house;
  RealBall mahler;
  RealBall weil;
  int degree = 0;
};

/// max |alpha_i| over all conjugates.
RealBall house(const AlgebraicNumber& alpha, Precision prec);
/// |a_d| prod max(1, |alpha_i|).
RealBall mahler(const AlgebraicNumber& alpha, Precision prec);
/// M(alpha)^(1/d). For rationals p/q the result is max(|p|, |q|) exactly.
RealBall weil_height(const AlgebraicNumber& alpha, Precision prec);
HeightReport height_report(const AlgebraicNumber& alpha, Precision prec);

struct GapVerdict {
  RealBall distance;
  RealBall bound;
  /// verified, inconclusive or violated.
  Verdict holds = Verdict::inconclusive;
};

/// |alpha - beta| against (2 H(alpha) H(beta))^(-deg alpha deg beta).
/// Throws ConjugatePair when both share a minimal polynomial.
GapVerdict liouville_gap(const AlgebraicNumber& alpha, const AlgebraicNumber& beta, Precision prec);

struct SuiteCheck {
  std::string id;
  std::string inputs;
  RealBall lhs;
  RealBall rhs;
  Verdict verdict = Verdict::inconclusive;
  /// Error kind when the check could not be formed (for example a degree cap).
  std::string note;
};

struct SuiteOptions {
  bool pairs = true;
  bool triples = true;
  int degree_cap = kDefaultDegreeCap;
};

/// Per number: weil <= house <= mahler (algebraic integers) and
/// H(1/alpha) = H(alpha) (nonzero). Per pair and triple: the sum and
/// product height bounds, with the exact sum and product built by `arith`.
std::vector<SuiteCheck> inequality_suite(const std::vector<AlgebraicNumber>& numbers, Precision prec,
                                         const SuiteOptions& options = {});

}  // namespace prodcert
