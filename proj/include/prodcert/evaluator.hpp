#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "prodcert/criteria.hpp"
#include "prodcert/roots.hpp"
#include "prodcert/spec.hpp"

namespace prodcert {

struct Enclosure {
  /// Radius already includes the tail bound.
  ComplexBall value;
  long terms_used = 0;
  Float tail_bound;
  /// Which tail formula fired: geometric, power, zeta, explicit or finite.
  std::string provenance;
  Precision precision = kDefaultPrecision;
  bool budget_exhausted = false;
  /// The product itself for finite specs with rational-integer data.
  std::optional<mpq_class> exact;
  /// Guaranteed floor of the inner factors (arrays only).
  std::optional<mpq_class> C0;
};

struct EvalPolicy {
  mpq_class target_radius = mpq_class(1, 1000000);
  Precision precision = kDefaultPrecision;
  Precision cap = 0;  // 0 means precision_cap()
  long max_terms = 400;
};

/// prod_{n<=N} (1 + b_n/alpha_n). Throws TermMagnitude when |b_n/alpha_n| < 1
/// cannot be certified.
ComplexBall partial_product(const SequenceSpec& spec, long N, Precision prec);
/// prod_{m<=N} (1 + sum_{n<=N-m+1} b_{n,m}/alpha_{n,m}). Throws FactorNearZero
/// when an inner factor may vanish.
ComplexBall partial_product_2d(const ArraySpec& spec, long N, Precision prec);

/// Upper bound for sum_{n>N} |b_n/alpha_n| from the majorant, after checking
/// the majorant on indices start..N+1.
Float tail_sum(const SequenceSpec& spec, long N, Precision prec);
/// Upper bound for the anti-diagonal sums beyond N, likewise.
Float tail_sum_2d(const ArraySpec& spec, long N, Precision prec);

/// Upper bound for sum_{k>N} u_k from `maj`, checking u_k against the
/// majorant on start..N+1 first. Terms below the majorant's start are summed.
Float majorant_sum(const TailMajorant& maj, long N, std::optional<long> length,
                   const std::function<RealBall(long, Precision)>& u, Precision prec, const char* where);

/// max{1, |x_N| e^S} S with S = tail_sum(spec, N).
Float tail_bound_thm1(const SequenceSpec& spec, long N, const ComplexBall& x_partial, Precision prec);
/// |x_N| T f e^(T f) with T = tail_sum_2d and f = max(1, 1/P) where P is the
/// smallest inner factor modulus at N.
Float tail_bound_thm2(const ArraySpec& spec, long N, const ComplexBall& x_partial, Precision prec);

/// The enclosure obtained from exactly N terms (N anti-diagonals).
Enclosure enclose(const SequenceSpec& spec, long N, Precision prec);
Enclosure enclose(const ArraySpec& spec, long N, Precision prec);

/// Adds terms until the enclosure radius reaches the target; on running out
/// of terms or precision the best enclosure is returned flagged.
Enclosure evaluate(const SequenceSpec& spec, const EvalPolicy& policy);
Enclosure evaluate(const ArraySpec& spec, const EvalPolicy& policy);

struct XiValue {
  ComplexBall xi;
  /// Re(xi) + 1/2 > 0 as far as the ball decides.
  Certainty above_half;
  Precision precision = kDefaultPrecision;
};

/// xi_{N,m} = (alpha_{N-m+1,m}/b_{N-m+1,m}) (1 + sum_{n<=N-m} b_{n,m}/alpha_{n,m}),
/// raising precision until the sign of Re(xi) + 1/2 separates or the cap.
XiValue xi_value(const ArraySpec& spec, long N, long m, Precision prec);

/// |1 + 1/xi|^2 - 1 and (1 + 2 Re xi)/|xi|^2 as balls.
std::pair<RealBall, RealBall> pivot_sides(const ComplexBall& xi);

struct Monotonicity {
  Verdict verdict = Verdict::inconclusive;
  /// +1 for nondecreasing, -1 for nonincreasing.
  int direction = 1;
  std::vector<RealBall> moduli;
  std::string witness;
};

/// Checks |x_N| monotone in `direction` for N = 1..N_max.
Monotonicity monotonicity(const SequenceSpec& spec, long N_max, int direction, Precision prec);
Monotonicity monotonicity(const ArraySpec& spec, long N_max, int direction, Precision prec);

}  // namespace prodcert
