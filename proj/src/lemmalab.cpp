#include "prodcert/lemmalab.hpp"

#include <mpfr.h>

#include <functional>

#include "prodcert/criteria.hpp"
#include "prodcert/error.hpp"
#include "prodcert/evaluator.hpp"
#include "prodcert/observables.hpp"

namespace prodcert {

namespace {

constexpr const char* kWhere = "lemmalab.verify_lemma";

std::string at_n(long n) { return "n=" + std::to_string(n); }

[[noreturn]] void precondition(const std::string& what, long n) {
  throw Error(ErrorKind::PreconditionFailed, kWhere, what, at_n(n));
}

RealBall q_ball(const mpq_class& q, Precision prec) { return RealBall::from_rational(q, prec); }
RealBall si(long v, Precision prec) { return RealBall::from_si(v, prec); }

// log2 a_n for a positive a_n given as num/den, tolerating huge values.
RealBall log2_a(const RationalExpr& a, long n, Precision prec) {
  const Value num = a.num.eval(n);
  int sign = num.sign();
  RealBall L(prec);
  if (sign != 0) L = num.log2_abs(prec);
  if (a.den) {
    const Value den = a.den->eval(n);
    if (den.is_zero()) precondition("a_n has a zero denominator", n);
    sign *= den.sign();
    if (sign != 0) L -= den.log2_abs(prec);
  }
  if (sign <= 0) precondition("a_n must be positive", n);
  return L;
}

// Caches log2 a_n and checks the standing hypotheses on a prefix.
class Sequence {
 public:
  Sequence(const RationalExpr& a, Precision prec) : a_(a), prec_(prec) {}

  const RealBall& L(long n) {
    while (static_cast<long>(logs_.size()) < n) {
      logs_.push_back(log2_a(a_, static_cast<long>(logs_.size()) + 1, prec_));
    }
    return logs_[static_cast<std::size_t>(n - 1)];
  }
  RealBall value(long n) { return exp2(L(n)); }

  void require_increasing(long from, long to, bool strict) {
    for (long n = std::max(2L, from); n <= to; ++n) {
      const Certainty c = strict ? less(L(n - 1), L(n)) : less_equal(L(n - 1), L(n));
      if (c != Certainty::certain) precondition(strict ? "a_n must increase" : "a_n must not decrease", n);
    }
  }
  // a_n > n^exponent, or >= for the non-strict form.
  void require_above_power(long from, long to, const mpq_class& exponent, bool strict) {
    for (long n = from; n <= to; ++n) {
      const RealBall bound = RealBall::from_rational(exponent, prec_) * log2(si(n, prec_));
      const Certainty c = strict ? less(bound, L(n)) : less_equal(bound, L(n));
      if (c != Certainty::certain) precondition("a_n must exceed n^" + exponent.get_str(), n);
    }
  }
  // 2^n < a_n
  void require_fast(long from, long to) {
    for (long n = from; n <= to; ++n) {
      if (less(si(n, prec_), L(n)) != Certainty::certain) precondition("a_n must exceed 2^n", n);
    }
  }

 private:
  const RationalExpr& a_;
  Precision prec_;
  std::vector<RealBall> logs_;
};

RealBall loglog_or_throw(const RealBall& L, const mpq_class& power, long n) {
  const auto v = loglog_power(L, power);
  if (!v) throw Error(ErrorKind::GuardFailed, kWhere, "ln ln a_n is not certainly positive", at_n(n));
  return *v;
}

// a_n^(-1 + (ln ln a_n)^-(3+eps))
RealBall slow_term(const RealBall& L, const mpq_class& eps, long n, Precision prec) {
  return exp2(L * (loglog_or_throw(L, 3 + eps, n) - si(1, prec)));
}

constexpr long kMaxTailTerms = 1L << 14;

// sum_{n>N} u_n: explicit terms until the majorant remainder drops below
// 2^-24 of their sum (or the term budget runs out), then the remainder.
RealBall sum_beyond(long N, std::optional<long> length, const TailMajorant& maj,
                    const std::function<RealBall(long, Precision)>& u, Precision prec, const char* where) {
  RealBall sum(prec);
  long K = N;
  for (long step = 1;; step *= 2) {
    const long to = std::min(N + step, length ? *length : N + step);
    for (; K < to; ++K) sum += u(K + 1, prec);
    if (length && K >= *length) return sum;
    const RealBall rest(majorant_sum(maj, K, length, u, prec, where), Float());
    if (step >= kMaxTailTerms || less_equal(rest, sum * exp2(si(-24, prec))) == Certainty::certain) {
      return hull(sum, sum + rest);
    }
  }
}

// sum_{n>=N} u_n with at least the prefix summed term by term.
RealBall series_with_tail(long N, long prefix, const TailMajorant& maj, const std::function<RealBall(long, Precision)>& u,
                          Precision prec) {
  RealBall head(prec);
  const long last = std::max(N - 1, prefix);
  for (long n = N; n <= last; ++n) head += u(n, prec);
  return head + sum_beyond(last, std::nullopt, maj, u, prec, kWhere);
}

Verdict classify(Verdict comparison) {
  switch (comparison) {
    case Verdict::verified: return Verdict::verified;
    case Verdict::failed: return Verdict::counterexample_candidate;
    default: return Verdict::inconclusive;
  }
}

LemmaReport compared(const LemmaCase& c, RealBall lhs, RealBall rhs, long index, bool strict, Precision prec) {
  LemmaReport r;
  r.name = c.name;
  r.lemma = c.lemma;
  r.verdict = classify(strict ? compare_lt(lhs, rhs) : compare_le(lhs, rhs));
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  r.index = index;
  r.precision = prec;
  return r;
}

LemmaReport series_upper(const LemmaCase& c, Precision prec) {
  Sequence a(c.a, prec);
  const long upto = std::max(c.prefix, c.N);
  a.require_increasing(1, upto, true);
  a.require_above_power(1, upto, 1 + c.epsilon, true);
  auto u = [&](long n, Precision) { return exp2(-a.L(n)); };
  const RealBall lhs = series_with_tail(c.N, c.prefix, c.majorant, u, prec);
  const RealBall eps = q_ball(c.epsilon, prec);
  const RealBall one = si(1, prec);
  const RealBall rhs = (si(2, prec) + one / eps) * exp2(-a.L(c.N) * eps / (one + eps));
  return compared(c, lhs, rhs, c.N, true, prec);
}

RealBall jump_factor_log2(const LemmaCase& c, long N, Precision prec) {
  const long k = c.jump_k ? *c.jump_k : N;
  const RealBall k2 = si(k, prec) * si(k, prec);
  return log2(si(1, prec) + si(1, prec) / k2);
}

LemmaReport jump(const LemmaCase& c, Precision prec) {
  if (c.prefix < 2) precondition("the jump search needs a prefix of at least 2", c.prefix);
  if (c.jump_k && *c.jump_k < 1) precondition("jump_k must be positive", *c.jump_k);
  Sequence a(c.a, prec);
  RealBall running = a.L(1);
  std::vector<long> found;
  RealBall lhs(prec), rhs(prec);
  for (long N = 1; N < c.prefix; ++N) {
    if (N > 1) running = max(running, a.L(N));
    const RealBall threshold = jump_factor_log2(c, N, prec) + running;
    const RealBall next = a.L(N + 1);
    if (less(threshold, next) == Certainty::certain) {
      found.push_back(N);
      lhs = next;
      rhs = threshold;
    } else if (found.empty()) {
      lhs = next;
      rhs = threshold;
    }
  }
  LemmaReport r;
  r.name = c.name;
  r.lemma = c.lemma;
  r.scale = "log2";
  r.lhs = lhs;
  r.rhs = rhs;
  r.precision = prec;
  r.verdict = found.empty() ? Verdict::inconclusive : Verdict::verified;
  r.index = found.empty() ? c.prefix - 1 : found.back();
  r.witness = found.empty() ? "no jump on the prefix"
                            : std::to_string(found.size()) + " jumps, first at N=" + std::to_string(found.front());
  return r;
}

LemmaReport series_general(const LemmaCase& c, Precision prec) {
  Sequence a(c.a, prec);
  const long upto = std::max(c.prefix, c.N);
  a.require_increasing(1, upto, false);
  a.require_above_power(1, upto, 1 + c.epsilon, false);
  auto u = [&](long n, Precision p) { return slow_term(a.L(n), c.epsilon, n, p); };
  const RealBall lhs = series_with_tail(c.N, c.prefix, c.majorant, u, prec);
  const RealBall eps = q_ball(c.epsilon, prec);
  const RealBall rhs = exp2(-a.L(c.N) * eps / (si(2, prec) * (si(1, prec) + eps)));
  return compared(c, lhs, rhs, c.N, true, prec);
}

RealBall fast_rhs(Sequence& a, const mpq_class& eps, long N, Precision prec) {
  const RealBall& L = a.L(N);
  return exp2(L * (loglog_or_throw(L, 3 + eps / 2, N) - si(1, prec)));
}

LemmaReport series_fast(const LemmaCase& c, Precision prec) {
  Sequence a(c.a, prec);
  const long upto = std::max(c.prefix, c.N);
  a.require_increasing(1, upto, false);
  a.require_above_power(1, upto, 1 + c.epsilon, false);
  a.require_fast(1, upto);
  auto u = [&](long n, Precision p) { return slow_term(a.L(n), c.epsilon, n, p); };
  const RealBall lhs = series_with_tail(c.N, c.prefix, c.majorant, u, prec);
  return compared(c, lhs, fast_rhs(a, c.epsilon, c.N, prec), c.N, true, prec);
}

LemmaReport corollary_fast(const LemmaCase& c, Precision prec) {
  if (c.k < c.N) precondition("the interval [t, k] is empty", c.k);
  Sequence a(c.a, prec);
  a.require_increasing(1, c.k, false);
  a.require_above_power(1, c.k, 1 + c.epsilon, false);
  a.require_fast(c.N, c.k);
  RealBall lhs(prec);
  for (long n = c.N; n <= c.k; ++n) lhs += slow_term(a.L(n), c.epsilon, n, prec);
  return compared(c, lhs, fast_rhs(a, c.epsilon, c.N, prec), c.N, true, prec);
}

RealBall gamma_ball(const mpq_class& x, Precision prec) {
  Float lo(prec), hi(prec);
  Float xlo = Float::from_rational(x, prec, MPFR_RNDD);
  Float xhi = Float::from_rational(x, prec, MPFR_RNDU);
  // Gamma increases on [2, inf); callers stay there.
  mpfr_gamma(lo.get(), xlo.get(), MPFR_RNDD);
  mpfr_gamma(hi.get(), xhi.get(), MPFR_RNDU);
  return RealBall::from_endpoints(lo, hi, prec);
}

LemmaReport prod_huge(const LemmaCase& c, Precision prec) {
  if (c.delta < 0 || c.delta >= 1) precondition("delta must lie in [0, 1)", 0);
  if (c.D < 1) precondition("D must be a positive integer", 0);
  if (c.prefix < 2) precondition("the search needs a prefix of at least 2", c.prefix);
  Sequence a(c.a, prec);
  a.require_increasing(1, c.prefix, false);

  std::vector<RealBall> Dn;
  for (long n = 1; n <= c.prefix; ++n) {
    const Value v = c.Dn.eval(n);
    if (!v.is_exact() || v.exact() < 1) precondition("D_n must be a positive integer", n);
    Dn.push_back(RealBall::from_integer(v.exact(), prec));
  }
  const RealBall D = si(c.D, prec);
  // D^n (n + delta)! prod_{i < n} D_i, and the same with (n + 1 + delta)!.
  auto weight = [&](long n, long shift) {
    RealBall w = pow_uint(D, static_cast<unsigned long>(n)) * gamma_ball(n + shift + 1 + c.delta, prec);
    for (long i = 1; i < n; ++i) w *= Dn[static_cast<std::size_t>(i - 1)];
    return w;
  };
  const RealBall delta = q_ball(c.delta, prec);

  RealBall best_root = a.L(1) / weight(1, 0);
  RealBall head_sum = (si(1, prec) + delta) * a.L(1);
  RealBall lhs(prec), rhs(prec);
  long hits = 0, first = 0, last = 0;
  for (long N = 1; N < c.prefix; ++N) {
    if (N > 1) {
      best_root = max(best_root, a.L(N) / weight(N, 0));
      head_sum += (si(N, prec) + delta) * a.L(N);
    }
    const RealBall jump = jump_factor_log2(c, N, prec);
    const RealBall next = a.L(N + 1);
    const bool bound_max = less(jump + best_root, next / weight(N + 1, 0)) == Certainty::certain;
    const RealBall prod_rhs = D * Dn[static_cast<std::size_t>(N - 1)] * (weight(N, 1) * jump + head_sum);
    const bool bound_prod = less(prod_rhs, next) == Certainty::certain;
    if (bound_max && bound_prod) {
      if (!hits++) {
        first = N;
        lhs = next;
        rhs = prod_rhs;
      }
      last = N;
    } else if (!hits) {
      lhs = next;
      rhs = prod_rhs;
    }
  }
  LemmaReport r;
  r.name = c.name;
  r.lemma = c.lemma;
  r.scale = "log2";
  r.lhs = lhs;
  r.rhs = rhs;
  r.precision = prec;
  r.verdict = hits ? Verdict::verified : Verdict::inconclusive;
  r.index = hits ? first : c.prefix - 1;
  r.witness = hits ? std::to_string(hits) + " indices satisfy both bounds, last N=" + std::to_string(last)
                   : "no index on the prefix satisfies both bounds";
  return r;
}

LemmaReport size_of_product(const LemmaCase& c, Precision prec) {
  std::vector<RealBall> terms;
  for (long n = 1; n <= c.prefix; ++n) terms.push_back(q_ball(c.a.eval(n), prec));
  auto u = [&](long n, Precision p) {
    return n <= c.prefix ? abs(terms[static_cast<std::size_t>(n - 1)].with_precision(p)) : abs(q_ball(c.a.eval(n), p));
  };
  const RealBall T(majorant_sum(c.majorant, c.prefix, std::nullopt, u, prec, kWhere), Float());

  RealBall x = si(1, prec);
  RealBall C_prefix = si(1, prec);
  RealBall sum(prec);
  for (const RealBall& t : terms) {
    x *= si(1, prec) + t;
    C_prefix = max(C_prefix, abs(x));
    sum += abs(t);
  }
  const RealBall spread = exp(T) - si(1, prec);
  const RealBall distance = abs(si(1, prec) - x);
  const RealBall lhs = hull(distance - abs(x) * spread, distance + abs(x) * spread);
  const RealBall C = hull(C_prefix, max(C_prefix, abs(x) * exp(T)));
  const RealBall rhs = C * hull(sum, sum + T);
  LemmaReport r = compared(c, max(lhs, RealBall(prec)), rhs, c.prefix, false, prec);
  r.witness = "C in " + short_string(C, 12);
  return r;
}

LemmaReport run(const LemmaCase& c, Precision prec) {
  switch (c.lemma) {
    case LemmaId::series_upper: return series_upper(c, prec);
    case LemmaId::jump: return jump(c, prec);
    case LemmaId::series_general: return series_general(c, prec);
    case LemmaId::series_fast: return series_fast(c, prec);
    case LemmaId::corollary_fast: return corollary_fast(c, prec);
    case LemmaId::prod_huge: return prod_huge(c, prec);
    case LemmaId::size_of_product: return size_of_product(c, prec);
  }
  throw Error(ErrorKind::Internal, kWhere, "unknown lemma");
}

}  // namespace

LemmaReport verify_lemma(const LemmaCase& c, Precision prec) {
  LemmaReport r = run(c, prec);
  if (r.verdict != Verdict::verified) {
    LemmaReport again = run(c, 2 * prec);
    if (again.verdict == Verdict::counterexample_candidate) {
      again.witness = "persists at " + std::to_string(2 * prec) + " bits; " + again.witness;
    }
    r = std::move(again);
  }
  return r;
}

std::string_view to_string(DiagnosticKind kind) {
  return kind == DiagnosticKind::Z_N ? "Z_N" : "lower_bound_1";
}

namespace {

constexpr const char* kDiagWhere = "lemmalab.diagnostic_series";
void push(Diagnostic& d, const RealBall& head, const RealBall& tail, Precision prec) {
  const bool zero = tail.is_exact() && tail.mid().is_zero();
  const RealBall value = zero ? RealBall(prec) : exp2(head) * tail;
  d.values.push_back(value);
  if (tail.certainly_positive()) d.log2_values.push_back(head + log2(tail));
  else d.log2_values.push_back(std::nullopt);
  d.running_min.push_back(d.running_min.empty() ? value : min(d.running_min.back(), value));
}

}  // namespace

Diagnostic diagnostic_series(const ArraySpec& spec, int D, long N_max, Precision prec) {
  Diagnostic d;
  d.kind = DiagnosticKind::Z_N;
  const TowerInfo tower = tower_info(spec, N_max);
  const RealBall DD = RealBall::from_si(D ? D : spec.D, prec);
  std::vector<RealBall> L;
  auto log_a = [&](long n) -> const RealBall& {
    while (static_cast<long>(L.size()) < n) {
      L.push_back(log2_abs_alpha(spec.term(static_cast<long>(L.size()) + 1, 1), prec));
    }
    return L[static_cast<std::size_t>(n - 1)];
  };
  auto lambda = [&](long n) {
    const auto v = loglog_power(log_a(n), 3 + spec.epsilon);
    if (!v) throw Error(ErrorKind::GuardFailed, kDiagWhere, "ln ln |alpha_{n,1}| is not certainly positive", at_n(n));
    return *v;
  };
  std::vector<RealBall> terms;
  auto u = [&](long n, Precision p) {
    if (p != prec) return exp2(log_a(n) * (lambda(n) - si(1, p)));
    while (static_cast<long>(terms.size()) < n) {
      const long k = static_cast<long>(terms.size()) + 1;
      terms.push_back(exp2(log_a(k) * (lambda(k) - si(1, p))));
    }
    return terms[static_cast<std::size_t>(n - 1)];
  };
  std::optional<long> length;
  if (spec.length) length = *spec.length;

  RealBall exponent(prec);
  for (long N = 1; N <= N_max; ++N) {
    if (spec.present(N, 1)) exponent += (si(N, prec) + si(N + 2, prec) * lambda(N)) * log_a(N);
    const RealBall DN = RealBall::from_integer(tower.D[static_cast<std::size_t>(N - 1)], prec);
    const RealBall head = DD * DN * (si(N * N, prec) + exponent);
    push(d, head, sum_beyond(N, length, spec.tail, u, prec, kDiagWhere), prec);
  }
  return d;
}

Diagnostic diagnostic_series(const SequenceSpec& spec, int D, long N_max, Precision prec) {
  Diagnostic d;
  d.kind = DiagnosticKind::lower_bound_1;
  const TowerInfo tower = tower_info(spec, N_max);
  const RealBall DD = RealBall::from_si(D ? D : spec.D, prec);
  const RealBall a = RealBall::from_rational(spec.a, prec);
  std::vector<Term> terms;
  auto term = [&](long n) -> const Term& {
    while (static_cast<long>(terms.size()) < n) terms.push_back(spec.term(static_cast<long>(terms.size()) + 1));
    return terms[static_cast<std::size_t>(n - 1)];
  };
  std::vector<RealBall> ratios;
  auto u = [&](long n, Precision p) {
    if (p != prec) return exp2(log2_abs_ratio(term(n), p));
    while (static_cast<long>(ratios.size()) < n) {
      ratios.push_back(exp2(log2_abs_ratio(term(static_cast<long>(ratios.size()) + 1), p)));
    }
    return ratios[static_cast<std::size_t>(n - 1)];
  };
  const long last = spec.length ? std::min(N_max, *spec.length) : N_max;

  RealBall sum(prec);
  for (long N = 1; N <= N_max; ++N) {
    const RealBall LN = N <= last ? log2_abs_alpha(term(N), prec) : RealBall(prec);
    if (!LN.certainly_nonnegative()) {
      throw Error(ErrorKind::GuardFailed, kDiagWhere, "log2 |alpha_N| must be nonnegative", at_n(N));
    }
    sum += LN;
    const RealBall DN = RealBall::from_integer(tower.D[static_cast<std::size_t>(N - 1)], prec);
    const RealBall head = DD * DN * (si(N * N, prec) * pow(LN, a) + sum);
    push(d, head, sum_beyond(N, spec.length, spec.tail, u, prec, kDiagWhere), prec);
  }
  return d;
}

Certainty decreased_by(const Diagnostic& d, const mpq_class& factor) {
  if (d.values.empty()) return Certainty::unknown;
  const Precision prec = d.values.front().precision();
  return less(d.running_min.back() * RealBall::from_rational(factor, prec), d.values.front());
}

}  // namespace prodcert
