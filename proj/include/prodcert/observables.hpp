#pragma once

// Numeric views of a Term shared by criteria, evaluator and lemmalab. All
// magnitudes are handled as log2 enclosures so that rational integers far
// beyond the floating exponent range stay usable.

#include <optional>
#include <vector>

#include "prodcert/spec.hpp"
#include "prodcert/verdict.hpp"

namespace prodcert {

RealBall log2_abs_alpha(const Term& t, Precision prec);
RealBall log2_house(const Term& t, Precision prec);
RealBall log2_b(const Term& t, Precision prec);
/// log2 |b / alpha|.
RealBall log2_abs_ratio(const Term& t, Precision prec);
/// b / alpha as a ball; underflows gracefully to [0 +/- tiny].
ComplexBall ratio(const Term& t, Precision prec);
/// alpha itself (wide or infinite when far outside the exponent range).
ComplexBall alpha_ball(const Term& t, Precision prec);

/// |alpha_s| < |alpha_t|, exact for rational integers.
Certainty abs_less(const Term& s, const Term& t, Precision prec);

/// Exact pieces of alpha = x + iy where they are cheap to know: rational
/// integers, certified real roots and non-real quadratics.
struct Parts {
  std::optional<mpq_class> re;
  std::optional<mpq_class> im2;
  std::optional<int> im_sign;
};
Parts parts_of(const Term& t, Precision prec);

/// Re(alpha/b) >= c and Re(alpha/b) > c.
struct RatioSign {
  Certainty ge = Certainty::unknown;
  Certainty gt = Certainty::unknown;
};
RatioSign re_ratio_versus(const Term& t, const Parts& parts, const mpq_class& c, Precision prec);

/// log2 of sum 2^l over the entries; requires a nonempty list.
RealBall log2_sum(const std::vector<RealBall>& logs);

/// (ln ln |alpha|)^(-power) from L = log2 |alpha|, or nothing when
/// ln ln |alpha| > 0 is not certain.
std::optional<RealBall> loglog_power(const RealBall& L, const mpq_class& power);

/// Worst of two verdicts in the order failed, inconclusive, verified.
Verdict worst(Verdict a, Verdict b);

/// Midpoint in %g style, with the radius only when it is nonzero.
std::string short_string(const RealBall& x, int digits = 12);

/// 2^x for display, or "2^(x)" when out of double range.
std::string magnitude_string(const RealBall& log2_value, int digits = 12);

}  // namespace prodcert
