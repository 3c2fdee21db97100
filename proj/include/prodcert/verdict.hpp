#pragma once

#include <string_view>

#include "prodcert/ball.hpp"

namespace prodcert {

enum class Verdict {
  verified,
  asserted,
  failed,
  inconclusive,
  violated,
  counterexample_candidate,
  skipped,
};

std::string_view to_string(Verdict v);

/// lhs <= rhs on balls: verified iff upper(lhs) <= lower(rhs), failed iff
/// lower(lhs) > upper(rhs).
Verdict compare_le(const RealBall& lhs, const RealBall& rhs);
/// lhs < rhs: verified iff upper(lhs) < lower(rhs), failed iff
/// lower(lhs) >= upper(rhs).
Verdict compare_lt(const RealBall& lhs, const RealBall& rhs);

/// Runs `attempt(prec)`; an inconclusive outcome is retried once at twice the
/// precision.
template <class Attempt>
auto with_one_doubling(Precision prec, Attempt attempt) {
  auto first = attempt(prec);
  if (first.verdict != Verdict::inconclusive) return first;
  return attempt(2 * prec);
}

}  // namespace prodcert
