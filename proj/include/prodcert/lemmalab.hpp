#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prodcert/ball.hpp"
#include "prodcert/spec.hpp"
#include "prodcert/verdict.hpp"

namespace prodcert {

struct LemmaReport {
  std::string name;
  LemmaId lemma = LemmaId::series_upper;
  /// verified, inconclusive or counterexample_candidate.
  Verdict verdict = Verdict::inconclusive;
  RealBall lhs;
  RealBall rhs;
  /// "value" when lhs and rhs are the compared quantities, "log2" when they
  /// are their base-2 logarithms.
  std::string scale = "value";
  /// The N (or t) the comparison was made at.
  long index = 0;
  std::string witness;
  Precision precision = kDefaultPrecision;
};

/// Validates the case's preconditions on its prefix (PreconditionFailed,
/// GuardFailed) and compares both sides as balls. A counterexample candidate
/// is rechecked at doubled precision before it is reported.
LemmaReport verify_lemma(const LemmaCase& c, Precision prec);

enum class DiagnosticKind { Z_N, lower_bound_1 };
std::string_view to_string(DiagnosticKind kind);

struct Diagnostic {
  DiagnosticKind kind = DiagnosticKind::Z_N;
  /// Index N = 1.. of each entry.
  std::vector<RealBall> values;
  /// log2 of values; absent where the value is zero.
  std::vector<std::optional<RealBall>> log2_values;
  /// Running minimum of the values from N = 1.
  std::vector<RealBall> running_min;
};

/// Z_N of an array spec (with a_n = |alpha_{n,1}|) or the lower-bound
/// quantity of a sequence, for N = 1..N_max. Tail sums use the declared
/// majorant, checked against the summed sequence. D = 0 keeps the declared D.
Diagnostic diagnostic_series(const ArraySpec& spec, int D, long N_max, Precision prec);
Diagnostic diagnostic_series(const SequenceSpec& spec, int D, long N_max, Precision prec);

/// Whether the running minimum at the end sits below value(1)/factor.
Certainty decreased_by(const Diagnostic& d, const mpq_class& factor);

}  // namespace prodcert
