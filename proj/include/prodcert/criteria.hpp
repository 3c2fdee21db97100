#pragma once

#include <string>
#include <vector>

#include "prodcert/spec.hpp"
#include "prodcert/verdict.hpp"

namespace prodcert {

enum class DegreeSource { verified, declared };
std::string_view to_string(DegreeSource s);

/// d_n and D_n for n = 1..N. For sequences D_n is the product of the d_i;
/// for arrays D_n = [K_n : Q] and d_n = D_n / D_{n-1}.
struct TowerInfo {
  std::vector<int> d;
  std::vector<mpz_class> D;
  std::vector<DegreeSource> source;
};

TowerInfo tower_info(const SequenceSpec& spec, long N);
TowerInfo tower_info(const ArraySpec& spec, long N);

/// log2 H_n for n = 1..N with H_n = |alpha_n|^(1/(D^n prod_{i<n}(D_i + d_i))).
std::vector<RealBall> growth_log2(const SequenceSpec& spec, const TowerInfo& tower, long N, Precision prec);
/// log2 of |alpha_{n,1}|^(1/(D^n n! prod_{i<n} D_i)) for n = 1..N.
std::vector<RealBall> growth_log2(const ArraySpec& spec, const TowerInfo& tower, long N, Precision prec);
/// The H_n themselves.
std::vector<RealBall> growth_sequence(const SequenceSpec& spec, long N, Precision prec);
std::vector<RealBall> growth_sequence(const ArraySpec& spec, long N, Precision prec);

struct HypothesisCheck {
  std::string id;
  Verdict verdict = Verdict::inconclusive;
  /// First offending index with both sides, or a summary of the prefix.
  std::string witness;
};

struct Certificate {
  int theorem = 1;
  int D = 1;
  long prefix_N = 0;
  std::vector<HypothesisCheck> checks;
  TowerInfo tower;
  /// log2 of the growth sequence.
  std::vector<RealBall> growth;
  bool certified = false;

  std::string conclusion() const { return certified ? "certified-conditional" : "not-certified"; }
  const HypothesisCheck* find(const std::string& id) const;
};

/// Sets `certified` from the checks: nothing failed and every check that is
/// not verified is asserted.
void conclude(Certificate& c);

Certificate check_theorem1(const SequenceSpec& spec, long N, Precision prec = kDefaultPrecision);
Certificate check_theorem2(const ArraySpec& spec, long N, Precision prec = kDefaultPrecision);

struct SignRecord {
  SignMode mode = SignMode::main;
  Verdict verdict = Verdict::inconclusive;
  /// Pairs where the mode's inequality was certified strict.
  long strict_count = 0;
  long pairs_checked = 0;
  /// Guaranteed floor for |1 + sum_n b/alpha|.
  mpq_class C0 = 1;
  std::string witness;
  /// Set when the outcome hinges on "strict infinitely often".
  bool needs_assertion = false;
};

SignRecord sign_condition_check(const ArraySpec& spec, long N, Precision prec = kDefaultPrecision);

}  // namespace prodcert
