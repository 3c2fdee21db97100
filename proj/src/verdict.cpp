#include "prodcert/verdict.hpp"

namespace prodcert {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::verified: return "verified";
    case Verdict::asserted: return "asserted";
    case Verdict::failed: return "failed";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::violated: return "violated";
    case Verdict::counterexample_candidate: return "counterexample-candidate";
    case Verdict::skipped: return "skipped";
  }
  return "unknown";
}

Verdict compare_le(const RealBall& lhs, const RealBall& rhs) {
  switch (less_equal(lhs, rhs)) {
    case Certainty::certain: return Verdict::verified;
    case Certainty::refuted: return Verdict::failed;
    case Certainty::unknown: return Verdict::inconclusive;
  }
  return Verdict::inconclusive;
}

Verdict compare_lt(const RealBall& lhs, const RealBall& rhs) {
  switch (less(lhs, rhs)) {
    case Certainty::certain: return Verdict::verified;
    case Certainty::refuted: return Verdict::failed;
    case Certainty::unknown: return Verdict::inconclusive;
  }
  return Verdict::inconclusive;
}

}  // namespace prodcert
