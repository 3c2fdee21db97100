#include "prodcert/evaluator.hpp"

#include <functional>
#include <map>

#include "prodcert/error.hpp"
#include "prodcert/observables.hpp"

namespace prodcert {

namespace {

std::string at_k(long k) { return "k=" + std::to_string(k); }
std::string at_nm(long n, long m) { return "(n,m)=(" + std::to_string(n) + "," + std::to_string(m) + ")"; }

RealBall exact_ball(const Float& x, Precision prec) { return RealBall(x, Float(kRadiusPrecision)).with_precision(prec); }

ComplexBall one(Precision prec) { return ComplexBall(RealBall::from_si(1, prec)); }

// Term cache for a sequence; terms are generated once and re-evaluated at
// whatever precision is asked for.
class SequenceTerms {
 public:
  explicit SequenceTerms(const SequenceSpec& spec) : spec_(spec) {}

  long last(long N) const { return spec_.length ? std::min(N, *spec_.length) : N; }

  const Term& term(long n) {
    while (static_cast<long>(terms_.size()) < n) terms_.push_back(spec_.term(static_cast<long>(terms_.size()) + 1));
    return terms_[static_cast<std::size_t>(n - 1)];
  }

  // b_n/alpha_n with |.| < 1 certified, raising precision up to the cap.
  ComplexBall ratio_checked(long n, Precision prec, Precision cap) {
    const Term& t = term(n);
    for (Precision p = prec;; p *= 2) {
      const ComplexBall z = ratio(t, p);
      if (less(z.abs(), RealBall::from_si(1, p)) == Certainty::certain) return p == prec ? z : ratio(t, prec);
      if (2 * p > cap) {
        throw Error(ErrorKind::TermMagnitude, "evaluator.partial_product", "|b/alpha| < 1 not certified",
                    "n=" + std::to_string(n));
      }
    }
  }

  RealBall magnitude(long n, Precision prec) { return ratio(term(n), prec).abs(); }

  bool all_real(long N) {
    if (last(N) >= 1) term(last(N));
    for (const auto& t : terms_) {
      if (!t.integer) return false;
    }
    return true;
  }

 private:
  const SequenceSpec& spec_;
  std::vector<Term> terms_;
};

class ArrayTerms {
 public:
  explicit ArrayTerms(const ArraySpec& spec) : spec_(spec) {}

  bool present(long n, long m) const { return spec_.present(n, m); }
  const Term& term(long n, long m) {
    auto it = terms_.find({n, m});
    if (it == terms_.end()) it = terms_.emplace(std::make_pair(n, m), spec_.term(n, m)).first;
    return it->second;
  }

  ComplexBall ratio_at(long n, long m, Precision prec) { return ratio(term(n, m), prec); }

  // Sum of |b/alpha| over the anti-diagonal n + m = s + 1.
  RealBall diagonal(long s, Precision prec) {
    RealBall sum(prec);
    for (long n = 1; n <= s; ++n) {
      const long m = s + 1 - n;
      if (present(n, m)) sum += ratio_at(n, m, prec).abs();
    }
    return sum;
  }

  bool all_real() {
    for (const auto& [k, t] : terms_) {
      if (!t.integer) return false;
    }
    return true;
  }

 private:
  const ArraySpec& spec_;
  std::map<std::pair<long, long>, Term> terms_;
};

using Magnitude = std::function<RealBall(long, Precision)>;

struct MajorantRun {
  Float sum;
  std::string provenance;
};

RealBall majorant_at(const TailMajorant& maj, long k, Precision prec) {
  switch (maj.kind) {
    case TailMajorant::Kind::geometric:
      return RealBall::from_rational(maj.c, prec) * pow_uint(RealBall::from_rational(maj.r, prec), static_cast<unsigned long>(k));
    case TailMajorant::Kind::zeta:
      return RealBall::from_rational(maj.c, prec) *
             pow(RealBall::from_si(k, prec), -RealBall::from_rational(maj.s, prec));
    case TailMajorant::Kind::power:
      return pow(RealBall::from_si(k, prec), -(RealBall::from_si(1, prec) + RealBall::from_rational(maj.epsilon, prec)));
    case TailMajorant::Kind::explicit_list: {
      const long i = k - maj.start;
      if (i < static_cast<long>(maj.bounds.size())) return RealBall::from_rational(maj.bounds[static_cast<std::size_t>(i)], prec);
      return RealBall(prec);
    }
    case TailMajorant::Kind::none: break;
  }
  return RealBall::whole(prec);
}

// Checks u_k <= majorant(k) (strict for the power kind, which also needs u
// nonincreasing) for k in [start, upto].
void verify_majorant(const TailMajorant& maj, long upto, std::optional<long> length, const Magnitude& u, Precision prec,
                     long& verified_upto, const char* where) {
  const long from = std::max(maj.start, verified_upto + 1);
  const long to = length ? std::min(upto, *length) : upto;
  for (long k = from; k <= to; ++k) {
    Certainty c = Certainty::unknown;
    for (Precision p = prec; p <= 2 * prec && c == Certainty::unknown; p *= 2) {
      const RealBall uk = u(k, p);
      const RealBall mk = majorant_at(maj, k, p);
      c = maj.kind == TailMajorant::Kind::power ? less(uk, mk) : less_equal(uk, mk);
      if (c == Certainty::certain && maj.kind == TailMajorant::Kind::power && k > maj.start) {
        c = less_equal(uk, u(k - 1, p));
      }
    }
    if (c != Certainty::certain) {
      throw Error(ErrorKind::MajorantUnverified, where,
                  std::string(to_string(maj.kind)) + " majorant not certified", at_k(k));
    }
  }
  if (to > verified_upto) verified_upto = to;
  if (maj.kind == TailMajorant::Kind::explicit_list) {
    const long covered = maj.start + static_cast<long>(maj.bounds.size()) - 1;
    if (!length || *length > covered) {
      throw Error(ErrorKind::MajorantUnverified, where, "explicit majorant ends before the product does",
                  at_k(covered + 1));
    }
  }
}

// Upper bound for sum_{k>N} u_k.
MajorantRun majorant_tail(const TailMajorant& maj, long N, std::optional<long> length, const Magnitude& u,
                          Precision prec, long& verified_upto, const char* where) {
  if (length && N >= *length) return MajorantRun{Float(kRadiusPrecision), "finite"};
  RealBall sum(prec);
  long K = N + 1;
  if (maj.kind == TailMajorant::Kind::none) {
    if (!length) throw Error(ErrorKind::MajorantUnverified, where, "no tail majorant for an infinite product");
    for (long k = K; k <= *length; ++k) sum += u(k, prec);
    return MajorantRun{sum.upper(), "finite"};
  }
  for (; K < maj.start && (!length || K <= *length); ++K) sum += u(K, prec);
  if (length && K > *length) return MajorantRun{sum.upper(), "finite"};
  verify_majorant(maj, K, length, u, prec, verified_upto, where);

  const RealBall c = RealBall::from_rational(maj.c, prec);
  const RealBall Kb = RealBall::from_si(K, prec);
  switch (maj.kind) {
    case TailMajorant::Kind::geometric: {
      const RealBall r = RealBall::from_rational(maj.r, prec);
      sum += c * pow_uint(r, static_cast<unsigned long>(K)) / (RealBall::from_si(1, prec) - r);
      break;
    }
    case TailMajorant::Kind::power: {
      // The series bound for the increasing sequence 1/u_k, shifted to start at K.
      const RealBall eps = RealBall::from_rational(maj.epsilon, prec);
      const RealBall one = RealBall::from_si(1, prec);
      const RealBall uK = exact_ball(u(K, prec).upper(), prec);
      sum += (RealBall::from_si(2, prec) + one / eps) * pow(uK, eps / (one + eps));
      break;
    }
    case TailMajorant::Kind::zeta: {
      const RealBall s = RealBall::from_rational(maj.s, prec);
      const RealBall one = RealBall::from_si(1, prec);
      sum += c * pow(Kb, -s) + c * pow(Kb, one - s) / (s - one);
      break;
    }
    case TailMajorant::Kind::explicit_list:
      for (long k = K; k < maj.start + static_cast<long>(maj.bounds.size()); ++k) {
        sum += RealBall::from_rational(maj.bounds[static_cast<std::size_t>(k - maj.start)], prec);
      }
      break;
    case TailMajorant::Kind::none: break;
  }
  return MajorantRun{sum.upper(), std::string(to_string(maj.kind))};
}

Float thm1_bound(const Float& S, const ComplexBall& x, Precision prec) {
  const RealBall s = exact_ball(S, prec);
  const RealBall lead = max(RealBall::from_si(1, prec), exact_ball(x.abs().upper(), prec) * exp(s));
  return (lead * s).upper();
}

Float thm2_bound(const Float& T, const ComplexBall& x, const RealBall& smallest_factor, Precision prec) {
  const Float floor = smallest_factor.mig();
  if (floor.is_zero()) {
    throw Error(ErrorKind::FactorNearZero, "evaluator.evaluate", "inner factor may vanish");
  }
  const RealBall f = max(RealBall::from_si(1, prec), RealBall::from_si(1, prec) / exact_ball(floor, prec));
  const RealBall tf = exact_ball(T, prec) * f;
  return (exact_ball(x.abs().upper(), prec) * tf * exp(tf)).upper();
}

ComplexBall widen(const ComplexBall& x, const Float& tail, bool real) {
  if (real) return ComplexBall(x.re().add_error(tail), x.im());
  return ComplexBall(x.re().add_error(tail), x.im().add_error(tail));
}

Float total_radius(const ComplexBall& x, const Float& tail) {
  RealBall r = RealBall(x.radius(), Float(kRadiusPrecision)) + RealBall(tail, Float(kRadiusPrecision));
  return r.upper();
}

bool within(const Float& r, const mpq_class& target) {
  return less_equal(RealBall(r, Float(kRadiusPrecision)), RealBall::from_rational(target, kRadiusPrecision)) ==
         Certainty::certain;
}

Magnitude sequence_magnitude(SequenceTerms& terms) {
  return [&terms](long k, Precision p) { return terms.magnitude(k, p); };
}

Magnitude array_magnitude(ArrayTerms& terms) {
  return [&terms](long s, Precision p) { return terms.diagonal(s, p); };
}

// Inner factors 1 + sum_{n<=N-m+1} b/alpha for m = 1..N.
std::vector<ComplexBall> inner_factors(ArrayTerms& terms, long N, Precision prec) {
  std::vector<ComplexBall> f;
  for (long m = 1; m <= N; ++m) {
    ComplexBall s = one(prec);
    for (long n = 1; n <= N - m + 1; ++n) {
      if (terms.present(n, m)) s += terms.ratio_at(n, m, prec);
    }
    if (s.contains_zero()) {
      throw Error(ErrorKind::FactorNearZero, "evaluator.partial_product_2d", "inner factor contains zero",
                  "m=" + std::to_string(m) + ", N=" + std::to_string(N));
    }
    f.push_back(s);
  }
  return f;
}

RealBall smallest_modulus(const std::vector<ComplexBall>& factors, Precision prec) {
  RealBall best = RealBall::from_si(1, prec);
  for (const auto& f : factors) best = min(best, f.abs());
  return best;
}

ComplexBall product_of(const std::vector<ComplexBall>& factors, Precision prec) {
  ComplexBall x = one(prec);
  for (const auto& f : factors) x *= f;
  return x;
}

std::optional<mpq_class> exact_product(SequenceTerms& terms, long N) {
  mpq_class x = 1;
  for (long n = 1; n <= N; ++n) {
    const Term& t = terms.term(n);
    if (!t.integer || !t.integer->is_exact() || !t.b.is_exact()) return std::nullopt;
    x *= 1 + mpq_class(t.b.exact(), t.integer->exact());
  }
  x.canonicalize();
  return x;
}

std::optional<mpq_class> exact_product(ArrayTerms& terms, long N) {
  mpq_class x = 1;
  for (long m = 1; m <= N; ++m) {
    mpq_class f = 1;
    for (long n = 1; n <= N - m + 1; ++n) {
      if (!terms.present(n, m)) continue;
      const Term& t = terms.term(n, m);
      if (!t.integer || !t.integer->is_exact() || !t.b.is_exact()) return std::nullopt;
      f += mpq_class(t.b.exact(), t.integer->exact());
    }
    x *= f;
  }
  x.canonicalize();
  return x;
}

}  // namespace

ComplexBall partial_product(const SequenceSpec& spec, long N, Precision prec) {
  SequenceTerms terms(spec);
  ComplexBall x = one(prec);
  for (long n = 1; n <= terms.last(N); ++n) x *= one(prec) + terms.ratio_checked(n, prec, precision_cap());
  return x;
}

ComplexBall partial_product_2d(const ArraySpec& spec, long N, Precision prec) {
  ArrayTerms terms(spec);
  return product_of(inner_factors(terms, N, prec), prec);
}

Float majorant_sum(const TailMajorant& maj, long N, std::optional<long> length,
                   const std::function<RealBall(long, Precision)>& u, Precision prec, const char* where) {
  long verified = 0;
  return majorant_tail(maj, N, length, u, prec, verified, where).sum;
}

Float tail_sum(const SequenceSpec& spec, long N, Precision prec) {
  SequenceTerms terms(spec);
  long verified = 0;
  return majorant_tail(spec.tail, N, spec.length, sequence_magnitude(terms), prec, verified, "evaluator.tail_bound_thm1")
      .sum;
}

Float tail_sum_2d(const ArraySpec& spec, long N, Precision prec) {
  ArrayTerms terms(spec);
  long verified = 0;
  return majorant_tail(spec.tail, N, spec.length, array_magnitude(terms), prec, verified, "evaluator.tail_bound_thm2")
      .sum;
}

Float tail_bound_thm1(const SequenceSpec& spec, long N, const ComplexBall& x_partial, Precision prec) {
  return thm1_bound(tail_sum(spec, N, prec), x_partial, prec);
}

Float tail_bound_thm2(const ArraySpec& spec, long N, const ComplexBall& x_partial, Precision prec) {
  ArrayTerms terms(spec);
  return thm2_bound(tail_sum_2d(spec, N, prec), x_partial, smallest_modulus(inner_factors(terms, N, prec), prec), prec);
}

Enclosure enclose(const SequenceSpec& spec, long N, Precision prec) {
  SequenceTerms terms(spec);
  const ComplexBall x = partial_product(spec, N, prec);
  long verified = 0;
  const MajorantRun tail =
      majorant_tail(spec.tail, N, spec.length, sequence_magnitude(terms), prec, verified, "evaluator.enclose");
  Enclosure e;
  e.tail_bound = thm1_bound(tail.sum, x, prec);
  e.value = widen(x, e.tail_bound, terms.all_real(N));
  e.terms_used = N;
  e.provenance = tail.provenance;
  e.precision = prec;
  return e;
}

Enclosure enclose(const ArraySpec& spec, long N, Precision prec) {
  ArrayTerms terms(spec);
  const std::vector<ComplexBall> factors = inner_factors(terms, N, prec);
  const ComplexBall x = product_of(factors, prec);
  long verified = 0;
  const MajorantRun tail =
      majorant_tail(spec.tail, N, spec.length, array_magnitude(terms), prec, verified, "evaluator.enclose");
  Enclosure e;
  e.tail_bound = thm2_bound(tail.sum, x, smallest_modulus(factors, prec), prec);
  e.value = widen(x, e.tail_bound, terms.all_real());
  e.terms_used = N;
  e.provenance = tail.provenance;
  e.precision = prec;
  return e;
}

Enclosure evaluate(const SequenceSpec& spec, const EvalPolicy& policy) {
  const Precision cap = policy.cap ? policy.cap : precision_cap();
  SequenceTerms terms(spec);
  const Magnitude u = sequence_magnitude(terms);
  Precision prec = policy.precision;
  long verified = 0;
  long N = 0;
  ComplexBall x = one(prec);
  std::optional<Enclosure> best;
  Float previous = Float::infinity();
  int stalls = 0;

  auto rebuild = [&](long upto) {
    x = one(prec);
    for (long n = 1; n <= upto; ++n) x *= one(prec) + terms.ratio_checked(n, prec, cap);
  };

  while (true) {
    const bool finished = spec.length && N >= *spec.length;
    if (!finished) {
      if (N >= policy.max_terms) break;
      ++N;
      x *= one(prec) + terms.ratio_checked(N, prec, cap);
    }
    const MajorantRun tail = majorant_tail(spec.tail, N, spec.length, u, prec, verified, "evaluator.evaluate");
    const Float bound = thm1_bound(tail.sum, x, prec);
    const Float total = total_radius(x, bound);

    Enclosure e;
    e.value = widen(x, bound, terms.all_real(N));
    e.terms_used = N;
    e.tail_bound = bound;
    e.provenance = tail.provenance;
    e.precision = prec;
    if (spec.length && N >= *spec.length) e.exact = exact_product(terms, N);
    if (!best || compare(total, total_radius(best->value, Float(kRadiusPrecision))) < 0) best = e;
    if (within(total, policy.target_radius)) return e;

    stalls = compare(total, previous) >= 0 ? stalls + 1 : 0;
    previous = total;
    const bool precision_bound = !within(x.radius(), policy.target_radius / 2);
    if (stalls >= 2 || precision_bound || finished) {
      if (2 * prec > cap) {
        if (finished || stalls >= 2) break;
        continue;
      }
      prec *= 2;
      stalls = 0;
      previous = Float::infinity();
      rebuild(N);
    }
  }
  best->budget_exhausted = true;
  return *best;
}

Enclosure evaluate(const ArraySpec& spec, const EvalPolicy& policy) {
  const Precision cap = policy.cap ? policy.cap : precision_cap();
  const SignRecord sign = sign_condition_check(spec, 3, policy.precision);
  ArrayTerms terms(spec);
  const Magnitude u = array_magnitude(terms);
  Precision prec = policy.precision;
  long verified = 0;
  long N = 0;
  std::optional<Enclosure> best;
  Float previous = Float::infinity();
  int stalls = 0;

  while (true) {
    const bool finished = spec.length && N >= *spec.length;
    if (!finished) {
      if (N >= policy.max_terms) break;
      ++N;
    }
    const std::vector<ComplexBall> factors = inner_factors(terms, N, prec);
    const ComplexBall x = product_of(factors, prec);
    const MajorantRun tail = majorant_tail(spec.tail, N, spec.length, u, prec, verified, "evaluator.evaluate");
    const Float bound = thm2_bound(tail.sum, x, smallest_modulus(factors, prec), prec);
    const Float total = total_radius(x, bound);

    Enclosure e;
    e.value = widen(x, bound, terms.all_real());
    e.terms_used = N;
    e.tail_bound = bound;
    e.provenance = tail.provenance;
    e.precision = prec;
    e.C0 = sign.C0;
    if (spec.length && N >= *spec.length) e.exact = exact_product(terms, N);
    if (!best || compare(total, total_radius(best->value, Float(kRadiusPrecision))) < 0) best = e;
    if (within(total, policy.target_radius)) return e;

    stalls = compare(total, previous) >= 0 ? stalls + 1 : 0;
    previous = total;
    const bool precision_bound = !within(x.radius(), policy.target_radius / 2);
    if (stalls >= 2 || precision_bound || finished) {
      if (2 * prec > cap) {
        if (finished || stalls >= 2) break;
        continue;
      }
      prec *= 2;
      stalls = 0;
      previous = Float::infinity();
    }
  }
  best->budget_exhausted = true;
  return *best;
}

XiValue xi_value(const ArraySpec& spec, long N, long m, Precision prec) {
  if (m < 1 || N < m) {
    throw Error(ErrorKind::InvalidArgument, "evaluator.xi_value", "need 1 <= m <= N", at_nm(N, m));
  }
  ArrayTerms terms(spec);
  const long top = N - m + 1;
  const Precision cap = precision_cap();
  XiValue out;
  for (Precision p = prec;; p *= 2) {
    ComplexBall inner = one(p);
    for (long n = 1; n < top; ++n) {
      if (terms.present(n, m)) inner += terms.ratio_at(n, m, p);
    }
    if (inner.contains_zero()) {
      throw Error(ErrorKind::FactorNearZero, "evaluator.xi_value", "inner factor contains zero", at_nm(N, m));
    }
    const Term& t = terms.term(top, m);
    out.xi = alpha_ball(t, p) / t.b.ball(p) * inner;
    out.above_half = less(RealBall::from_rational(mpq_class(-1, 2), p), out.xi.re());
    if (out.above_half == Certainty::unknown && less_equal(out.xi.re(), RealBall::from_rational(mpq_class(-1, 2), p)) ==
                                                    Certainty::certain) {
      out.above_half = Certainty::refuted;
    }
    out.precision = p;
    if (out.above_half != Certainty::unknown || 2 * p > cap) return out;
  }
}

std::pair<RealBall, RealBall> pivot_sides(const ComplexBall& xi) {
  const Precision p = xi.precision();
  const RealBall one_r = RealBall::from_si(1, p);
  const RealBall lhs = sqr((one(p) + one(p) / xi).abs()) - one_r;
  const RealBall rhs = (one_r + RealBall::from_si(2, p) * xi.re()) / sqr(xi.abs());
  return {lhs, rhs};
}

namespace {

Certainty ordered(const RealBall& a, const RealBall& b, int direction) {
  return direction > 0 ? less_equal(a, b) : less_equal(b, a);
}

template <class Modulus, class Factor>
Monotonicity monotone(long N_max, int direction, Precision prec, Modulus modulus, Factor factor_side) {
  Monotonicity out;
  out.direction = direction;
  out.verdict = Verdict::verified;
  const Precision cap = precision_cap();
  for (long N = 1; N <= N_max; ++N) out.moduli.push_back(modulus(N, prec));
  for (long N = 1; N < N_max; ++N) {
    Certainty c = ordered(out.moduli[static_cast<std::size_t>(N - 1)], out.moduli[static_cast<std::size_t>(N)], direction);
    if (c == Certainty::unknown) c = factor_side(N + 1);
    for (Precision p = 2 * prec; c == Certainty::unknown && p <= cap; p *= 2) {
      c = ordered(modulus(N, p), modulus(N + 1, p), direction);
    }
    if (c == Certainty::certain) continue;
    const std::string where = "N=" + std::to_string(N) + ": |x_N|=" + short_string(out.moduli[static_cast<std::size_t>(N - 1)]) +
                              " |x_{N+1}|=" + short_string(out.moduli[static_cast<std::size_t>(N)]);
    if (c == Certainty::refuted) {
      out.verdict = Verdict::failed;
      out.witness = where;
      return out;
    }
    if (out.verdict == Verdict::verified) {
      out.verdict = Verdict::inconclusive;
      out.witness = where;
    }
  }
  if (out.witness.empty()) out.witness = std::to_string(N_max) + " partial products";
  return out;
}

}  // namespace

Monotonicity monotonicity(const SequenceSpec& spec, long N_max, int direction, Precision prec) {
  SequenceTerms terms(spec);
  const Precision cap = precision_cap();
  auto modulus = [&](long N, Precision p) {
    ComplexBall x = one(p);
    for (long n = 1; n <= terms.last(N); ++n) x *= one(p) + terms.ratio_checked(n, p, cap);
    return x.abs();
  };
  // |1 + b/alpha| >= 1 exactly when Re(alpha/b) >= -1/2.
  auto factor_side = [&](long N) {
    if (N > terms.last(N)) return Certainty::certain;
    const Term& t = terms.term(N);
    const RatioSign s = re_ratio_versus(t, parts_of(t, prec), mpq_class(-1, 2), prec);
    if (direction > 0) return s.ge;
    return s.gt == Certainty::certain ? Certainty::refuted : s.gt == Certainty::refuted ? Certainty::certain
                                                                                         : Certainty::unknown;
  };
  return monotone(N_max, direction, prec, modulus, factor_side);
}

Monotonicity monotonicity(const ArraySpec& spec, long N_max, int direction, Precision prec) {
  ArrayTerms terms(spec);
  auto modulus = [&](long N, Precision p) { return product_of(inner_factors(terms, N, p), p).abs(); };
  // |x_N / x_{N-1}| is the product of |1 + 1/xi_{N,m}|.
  auto factor_side = [&](long N) {
    for (long m = 1; m <= N; ++m) {
      if (!terms.present(N - m + 1, m)) continue;
      const Certainty above = xi_value(spec, N, m, prec).above_half;
      const Certainty ok = direction > 0 ? above
                           : above == Certainty::refuted ? Certainty::certain
                           : above == Certainty::certain ? Certainty::refuted
                                                         : Certainty::unknown;
      if (ok != Certainty::certain) return Certainty::unknown;
    }
    return Certainty::certain;
  };
  return monotone(N_max, direction, prec, modulus, factor_side);
}

}  // namespace prodcert
