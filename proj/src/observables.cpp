#include "prodcert/observables.hpp"

#include "prodcert/error.hpp"
#include "prodcert/heights.hpp"

namespace prodcert {

RealBall log2_abs_alpha(const Term& t, Precision prec) {
  if (t.integer) return t.integer->log2_abs(prec);
  return log2(approximate(*t.algebraic, prec).abs());
}

RealBall log2_house(const Term& t, Precision prec) {
  if (t.integer) return t.integer->log2_abs(prec);
  return log2(house(*t.algebraic, prec));
}

RealBall log2_b(const Term& t, Precision prec) { return t.b.log2_abs(prec); }

RealBall log2_abs_ratio(const Term& t, Precision prec) { return log2_b(t, prec) - log2_abs_alpha(t, prec); }

ComplexBall ratio(const Term& t, Precision prec) {
  if (t.integer) {
    if (t.integer->is_exact() && t.b.is_exact()) {
      return ComplexBall(RealBall::from_integer(t.b.exact(), prec) /
                         RealBall::from_integer(t.integer->exact(), prec));
    }
    const RealBall mag = exp2(log2_abs_ratio(t, prec));
    return ComplexBall(t.integer->sign() < 0 ? -mag : mag);
  }
  return ComplexBall(t.b.ball(prec)) / approximate(*t.algebraic, prec);
}

ComplexBall alpha_ball(const Term& t, Precision prec) {
  if (t.integer) return ComplexBall(t.integer->ball(prec));
  return approximate(*t.algebraic, prec);
}

Certainty abs_less(const Term& s, const Term& t, Precision prec) {
  if (s.integer && t.integer) {
    const Value a = s.integer->sign() < 0 ? -*s.integer : *s.integer;
    const Value b = t.integer->sign() < 0 ? -*t.integer : *t.integer;
    return value_less(a, b);
  }
  return less(log2_abs_alpha(s, prec), log2_abs_alpha(t, prec));
}

RealBall log2_sum(const std::vector<RealBall>& logs) {
  if (logs.empty()) throw Error(ErrorKind::Internal, "observables.log2_sum", "empty sum");
  const Precision prec = logs.front().precision();
  Float top = logs.front().mid();
  for (const auto& l : logs) {
    if (compare(l.mid(), top) > 0) top = l.mid();
  }
  const RealBall shift(top, Float(kRadiusPrecision));
  RealBall sum(prec);
  for (const auto& l : logs) sum += exp2(l - shift);
  return shift + log2(sum);
}

std::optional<RealBall> loglog_power(const RealBall& L, const mpq_class& power) {
  const Precision prec = L.precision();
  const RealBall lnln = log(L * log(RealBall::from_si(2, prec)));
  if (!lnln.certainly_positive()) return std::nullopt;
  return pow(lnln, -RealBall::from_rational(power, prec));
}

namespace {

Certainty of(bool b) { return b ? Certainty::certain : Certainty::refuted; }

RatioSign from_sign(int s) { return RatioSign{of(s >= 0), of(s > 0)}; }

bool certified_real(const AlgebraicNumber& alpha, Precision prec) {
  const ComplexBall z = approximate(alpha, prec);
  if (!z.im().contains_zero()) return false;
  const ComplexBall w = z.conj();
  int hits = 0;
  for (const auto& r : conjugate_enclosures(alpha, prec)) {
    if (r.overlaps(w)) ++hits;
  }
  return hits == 1 && w.overlaps(z);
}

}  // namespace

Parts parts_of(const Term& t, Precision prec) {
  Parts p;
  if (t.integer) {
    if (t.integer->is_exact()) p.re = mpq_class(t.integer->exact());
    p.im2 = 0;
    p.im_sign = 0;
    return p;
  }
  const AlgebraicNumber& a = *t.algebraic;
  const IntPoly& f = a.minpoly();
  if (f.degree() == 2) {
    const mpz_class disc = f.coeff(1) * f.coeff(1) - 4 * f.coeff(0) * f.coeff(2);
    if (disc < 0) {
      p.re = mpq_class(-f.coeff(1), 2 * f.coeff(2));
      p.re->canonicalize();
      p.im2 = mpq_class(-disc, 4 * f.coeff(2) * f.coeff(2));
      p.im2->canonicalize();
      p.im_sign = approximate(a, prec).im().certainly_positive() ? 1 : -1;
      return p;
    }
  }
  if (certified_real(a, prec)) {
    p.im2 = 0;
    p.im_sign = 0;
  }
  return p;
}

RatioSign re_ratio_versus(const Term& t, const Parts& parts, const mpq_class& c, Precision prec) {
  if (t.integer) {
    try {
      const Value diff = Value(mpz_class(c.get_den())) * *t.integer - Value(mpz_class(c.get_num())) * t.b;
      return from_sign(diff.sign());
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ExpressionError) throw;
      return RatioSign{};
    }
  }
  if (parts.re && t.b.is_exact()) return from_sign(sgn(*parts.re - c * mpq_class(t.b.exact())));
  auto at = [&](Precision p) {
    const RealBall x = approximate(*t.algebraic, p).re() / t.b.ball(p) - RealBall::from_rational(c, p);
    return RatioSign{less_equal(RealBall(p), x), less(RealBall(p), x)};
  };
  RatioSign r = at(prec);
  if (r.ge == Certainty::unknown || r.gt == Certainty::unknown) {
    const RatioSign r2 = at(2 * prec);
    if (r.ge == Certainty::unknown) r.ge = r2.ge;
    if (r.gt == Certainty::unknown) r.gt = r2.gt;
  }
  return r;
}

namespace {

int rank(Verdict v) {
  switch (v) {
    case Verdict::verified: return 0;
    case Verdict::asserted: return 1;
    case Verdict::skipped: return 1;
    case Verdict::inconclusive: return 2;
    case Verdict::failed:
    case Verdict::violated:
    case Verdict::counterexample_candidate: return 3;
  }
  return 3;
}

}  // namespace

Verdict worst(Verdict a, Verdict b) { return rank(b) > rank(a) ? b : a; }

std::string short_string(const RealBall& x, int digits) {
  char* raw = nullptr;
  mpfr_asprintf(&raw, "%.*Rg", digits, x.mid().get());
  std::string out(raw);
  mpfr_free_str(raw);
  if (!x.rad().is_zero()) out += "+/-" + x.rad().to_string(2);
  return out;
}

std::string magnitude_string(const RealBall& log2_value, int digits) {
  const double l = log2_value.to_double();
  if (l > -1000 && l < 1000) return short_string(exp2(log2_value), digits);
  return "2^(" + short_string(log2_value, digits) + ")";
}

}  // namespace prodcert
