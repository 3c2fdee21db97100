#include "prodcert/ball.hpp"

#include <algorithm>
#include <utility>

namespace prodcert {

namespace {

// The exponent range is per thread in thread-safe MPFR builds.
void ensure_exponent_range() {
  thread_local const bool configured = [] {
    mpfr_set_emin(mpfr_get_emin_min());
    mpfr_set_emax(mpfr_get_emax_max());
    return true;
  }();
  (void)configured;
}

// Upper bound on the error of a round-to-nearest result `mid`.
Float rounding_error(const Float& mid, int ternary) {
  Float err(kRadiusPrecision);
  if (ternary == 0) return err;
  if (mid.is_zero() || !mid.is_finite()) {
    mpfr_set_ui_2exp(err.get(), 1, mpfr_get_emin(), MPFR_RNDU);
    return err;
  }
  const mpfr_exp_t e = mpfr_get_exp(mid.get());
  mpfr_set_ui_2exp(err.get(), 1, e - mid.precision(), MPFR_RNDU);
  return err;
}

Float abs_up(const Float& x) {
  Float out(kRadiusPrecision);
  mpfr_abs(out.get(), x.get(), MPFR_RNDU);
  return out;
}

Float abs_down(const Float& x) {
  Float out(kRadiusPrecision);
  mpfr_abs(out.get(), x.get(), MPFR_RNDD);
  return out;
}

Float add_up(const Float& a, const Float& b) {
  Float out(kRadiusPrecision);
  mpfr_add(out.get(), a.get(), b.get(), MPFR_RNDU);
  return out;
}

Float mul_up(const Float& a, const Float& b) {
  Float out(kRadiusPrecision);
  mpfr_mul(out.get(), a.get(), b.get(), MPFR_RNDU);
  return out;
}

Precision joint(const RealBall& a, const RealBall& b) {
  return std::max(a.precision(), b.precision());
}

mpq_class exact_lower(const RealBall& x) {
  return x.mid().to_rational() - x.rad().to_rational();
}

mpq_class exact_upper(const RealBall& x) {
  return x.mid().to_rational() + x.rad().to_rational();
}

template <class Fn>
RealBall monotone(const RealBall& x, Fn fn, bool increasing) {
  const Precision prec = x.precision();
  const Float lo = x.lower();
  const Float hi = x.upper();
  Float flo(prec);
  Float fhi(prec);
  if (increasing) {
    fn(flo.get(), lo.get(), MPFR_RNDD);
    fn(fhi.get(), hi.get(), MPFR_RNDU);
  } else {
    fn(flo.get(), hi.get(), MPFR_RNDD);
    fn(fhi.get(), lo.get(), MPFR_RNDU);
  }
  return RealBall::from_endpoints(flo, fhi, prec);
}

}  // namespace

// ---------------------------------------------------------------- Float

Float::Float(Precision prec) {
  ensure_exponent_range();
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
}

Float::Float(const Float& other) {
  ensure_exponent_range();
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Float::Float(Float&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_set_zero(value_, 1);
  mpfr_swap(value_, other.value_);
}

Float& Float::operator=(const Float& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Float& Float::operator=(Float&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

Float::~Float() { mpfr_clear(value_); }

Float Float::from_integer(const mpz_class& z, Precision prec, mpfr_rnd_t rnd) {
  Float out(prec);
  mpfr_set_z(out.get(), z.get_mpz_t(), rnd);
  return out;
}

Float Float::from_si(long v, Precision prec) {
  Float out(prec);
  mpfr_set_si(out.get(), v, MPFR_RNDN);
  return out;
}

Float Float::from_rational(const mpq_class& q, Precision prec, mpfr_rnd_t rnd) {
  Float out(prec);
  mpfr_set_q(out.get(), q.get_mpq_t(), rnd);
  return out;
}

Float Float::pow2(long exponent, Precision prec) {
  Float out(prec);
  mpfr_set_ui_2exp(out.get(), 1, exponent, MPFR_RNDN);
  return out;
}

Float Float::infinity(Precision prec) {
  Float out(prec);
  mpfr_set_inf(out.get(), 1);
  return out;
}

double Float::to_double(mpfr_rnd_t rnd) const { return mpfr_get_d(value_, rnd); }

mpq_class Float::to_rational() const {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), value_);
  return q;
}

std::string Float::to_string(int digits) const {
  char* raw = nullptr;
  mpfr_asprintf(&raw, "%.*Re", std::max(digits - 1, 0), value_);
  std::string out(raw);
  mpfr_free_str(raw);
  return out;
}

int compare(const Float& a, const Float& b) { return mpfr_cmp(a.get(), b.get()); }

// ------------------------------------------------------------- RealBall

RealBall::RealBall() : mid_(kDefaultPrecision), rad_(kRadiusPrecision) {}

RealBall::RealBall(Precision prec) : mid_(prec), rad_(kRadiusPrecision) {}

RealBall::RealBall(Float mid, Float rad) : mid_(std::move(mid)), rad_(kRadiusPrecision) {
  if (mpfr_nan_p(rad.get()) || mpfr_nan_p(mid_.get())) {
    mpfr_set_inf(rad_.get(), 1);
    mpfr_set_zero(mid_.get(), 1);
    return;
  }
  mpfr_abs(rad_.get(), rad.get(), MPFR_RNDU);
  if (!mid_.is_finite()) {
    mpfr_set_zero(mid_.get(), 1);
    mpfr_set_inf(rad_.get(), 1);
  }
}

RealBall RealBall::from_si(long v, Precision prec) {
  Float mid(prec);
  const int t = mpfr_set_si(mid.get(), v, MPFR_RNDN);
  Float err = rounding_error(mid, t);
  return RealBall(std::move(mid), std::move(err));
}

RealBall RealBall::from_integer(const mpz_class& z, Precision prec) {
  Float mid(prec);
  const int t = mpfr_set_z(mid.get(), z.get_mpz_t(), MPFR_RNDN);
  Float err = rounding_error(mid, t);
  return RealBall(std::move(mid), std::move(err));
}

RealBall RealBall::from_rational(const mpq_class& q, Precision prec) {
  Float mid(prec);
  const int t = mpfr_set_q(mid.get(), q.get_mpq_t(), MPFR_RNDN);
  Float err = rounding_error(mid, t);
  return RealBall(std::move(mid), std::move(err));
}

RealBall RealBall::from_endpoints(const Float& lo, const Float& hi, Precision prec) {
  if (!lo.is_finite() || !hi.is_finite()) return whole(prec);
  Float mid(prec);
  mpfr_add(mid.get(), lo.get(), hi.get(), MPFR_RNDN);
  mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
  Float up(kRadiusPrecision);
  Float down(kRadiusPrecision);
  mpfr_sub(up.get(), hi.get(), mid.get(), MPFR_RNDU);
  mpfr_sub(down.get(), mid.get(), lo.get(), MPFR_RNDU);
  Float rad(kRadiusPrecision);
  mpfr_max(rad.get(), up.get(), down.get(), MPFR_RNDU);
  if (rad.sign() < 0) mpfr_set_zero(rad.get(), 1);
  return RealBall(std::move(mid), std::move(rad));
}

RealBall RealBall::whole(Precision prec) {
  return RealBall(Float(prec), Float::infinity());
}

Float RealBall::lower() const {
  Float out(precision());
  mpfr_sub(out.get(), mid_.get(), rad_.get(), MPFR_RNDD);
  return out;
}

Float RealBall::upper() const {
  Float out(precision());
  mpfr_add(out.get(), mid_.get(), rad_.get(), MPFR_RNDU);
  return out;
}

Float RealBall::mag() const { return add_up(abs_up(mid_), rad_); }

Float RealBall::mig() const {
  Float out(kRadiusPrecision);
  mpfr_sub(out.get(), abs_down(mid_).get(), rad_.get(), MPFR_RNDD);
  if (out.sign() < 0) mpfr_set_zero(out.get(), 1);
  return out;
}

bool RealBall::contains_zero() const { return mpfr_cmpabs(mid_.get(), rad_.get()) <= 0; }

bool RealBall::contains(const mpq_class& q) const {
  if (!rad_.is_finite()) return true;
  mpq_class d = mid_.to_rational() - q;
  if (d < 0) d = -d;
  return d <= rad_.to_rational();
}

bool RealBall::contains(const RealBall& other) const {
  if (!rad_.is_finite()) return true;
  if (!other.is_finite()) return false;
  // |m - m'| + r' <= r, decided cheaply when the margin is clear.
  Float diff(kRadiusPrecision);
  mpfr_sub(diff.get(), mid_.get(), other.mid_.get(), MPFR_RNDU);
  Float need = add_up(abs_up(diff), other.rad_);
  if (compare(need, rad_) <= 0) {
    Float diff_dn(kRadiusPrecision);
    mpfr_sub(diff_dn.get(), mid_.get(), other.mid_.get(), MPFR_RNDD);
    Float need_dn = add_up(abs_up(diff_dn), other.rad_);
    if (compare(need_dn, rad_) <= 0) return true;
  }
  return exact_lower(*this) <= exact_lower(other) && exact_upper(other) <= exact_upper(*this);
}

bool RealBall::overlaps(const RealBall& other) const {
  if (!is_finite() || !other.is_finite()) return true;
  Float gap_dn(kRadiusPrecision);
  mpfr_sub(gap_dn.get(), mid_.get(), other.mid_.get(), MPFR_RNDZ);
  Float gap = abs_down(gap_dn);
  Float span = add_up(rad_, other.rad_);
  if (compare(gap, span) > 0) {
    // Possibly disjoint; settle exactly.
    return !(exact_upper(*this) < exact_lower(other) || exact_upper(other) < exact_lower(*this));
  }
  return true;
}

bool RealBall::certainly_positive() const { return lower().sign() > 0; }
bool RealBall::certainly_negative() const { return upper().sign() < 0; }
bool RealBall::certainly_nonnegative() const { return lower().sign() >= 0; }
bool RealBall::certainly_nonpositive() const { return upper().sign() <= 0; }

RealBall RealBall::with_precision(Precision prec) const {
  Float mid(prec);
  const int t = mpfr_set(mid.get(), mid_.get(), MPFR_RNDN);
  Float err = add_up(rad_, rounding_error(mid, t));
  return RealBall(std::move(mid), std::move(err));
}

RealBall RealBall::add_error(const Float& err) const {
  return RealBall(mid_, add_up(rad_, abs_up(err)));
}

std::string RealBall::to_string(int digits) const {
  return mid_.to_string(digits) + "[+/-" + rad_.to_string(3) + "]";
}

RealBall RealBall::operator-() const {
  Float mid(precision());
  mpfr_neg(mid.get(), mid_.get(), MPFR_RNDN);
  return RealBall(std::move(mid), rad_);
}

RealBall& RealBall::operator+=(const RealBall& other) { return *this = *this + other; }
RealBall& RealBall::operator-=(const RealBall& other) { return *this = *this - other; }
RealBall& RealBall::operator*=(const RealBall& other) { return *this = *this * other; }
RealBall& RealBall::operator/=(const RealBall& other) { return *this = *this / other; }

RealBall operator+(const RealBall& a, const RealBall& b) {
  Float mid(joint(a, b));
  const int t = mpfr_add(mid.get(), a.mid().get(), b.mid().get(), MPFR_RNDN);
  Float rad = add_up(add_up(a.rad(), b.rad()), rounding_error(mid, t));
  return RealBall(std::move(mid), std::move(rad));
}

RealBall operator-(const RealBall& a, const RealBall& b) {
  Float mid(joint(a, b));
  const int t = mpfr_sub(mid.get(), a.mid().get(), b.mid().get(), MPFR_RNDN);
  Float rad = add_up(add_up(a.rad(), b.rad()), rounding_error(mid, t));
  return RealBall(std::move(mid), std::move(rad));
}

RealBall operator*(const RealBall& a, const RealBall& b) {
  Float mid(joint(a, b));
  const int t = mpfr_mul(mid.get(), a.mid().get(), b.mid().get(), MPFR_RNDN);
  Float rad(kRadiusPrecision);
  if (!a.is_exact() || !b.is_exact()) {
    rad = add_up(mul_up(abs_up(a.mid()), b.rad()), mul_up(abs_up(b.mid()), a.rad()));
    rad = add_up(rad, mul_up(a.rad(), b.rad()));
  }
  rad = add_up(rad, rounding_error(mid, t));
  return RealBall(std::move(mid), std::move(rad));
}

RealBall operator/(const RealBall& a, const RealBall& b) {
  const Precision prec = joint(a, b);
  if (b.contains_zero()) return RealBall::whole(prec);
  Float mid(prec);
  const int t = mpfr_div(mid.get(), a.mid().get(), b.mid().get(), MPFR_RNDN);
  Float rad(kRadiusPrecision);
  if (!a.is_exact() || !b.is_exact()) {
    Float num = add_up(mul_up(abs_up(a.mid()), b.rad()), mul_up(abs_up(b.mid()), a.rad()));
    Float bm = abs_down(b.mid());
    Float margin(kRadiusPrecision);
    mpfr_sub(margin.get(), bm.get(), b.rad().get(), MPFR_RNDD);
    Float den(kRadiusPrecision);
    mpfr_mul(den.get(), bm.get(), margin.get(), MPFR_RNDD);
    if (den.sign() <= 0) return RealBall::whole(prec);
    mpfr_div(rad.get(), num.get(), den.get(), MPFR_RNDU);
  }
  rad = add_up(rad, rounding_error(mid, t));
  return RealBall(std::move(mid), std::move(rad));
}

RealBall abs(const RealBall& x) {
  if (x.certainly_nonnegative()) return x;
  if (x.certainly_nonpositive()) return -x;
  Float zero(x.precision());
  Float hi(x.precision());
  mpfr_set(hi.get(), x.mag().get(), MPFR_RNDU);
  return RealBall::from_endpoints(zero, hi, x.precision());
}

RealBall sqr(const RealBall& x) {
  if (!x.contains_zero()) return x * x;
  Float hi(x.precision());
  Float m = x.mag();
  mpfr_mul(hi.get(), m.get(), m.get(), MPFR_RNDU);
  return RealBall::from_endpoints(Float(x.precision()), hi, x.precision());
}

RealBall sqrt_nonneg(const RealBall& x) {
  const Precision prec = x.precision();
  Float lo = x.lower();
  Float hi = x.upper();
  if (hi.sign() < 0) return RealBall::whole(prec);
  if (lo.sign() < 0) mpfr_set_zero(lo.get(), 1);
  Float slo(prec);
  Float shi(prec);
  mpfr_sqrt(slo.get(), lo.get(), MPFR_RNDD);
  mpfr_sqrt(shi.get(), hi.get(), MPFR_RNDU);
  return RealBall::from_endpoints(slo, shi, prec);
}

RealBall exp(const RealBall& x) { return monotone(x, mpfr_exp, true); }
RealBall exp2(const RealBall& x) { return monotone(x, mpfr_exp2, true); }

RealBall log(const RealBall& x) {
  if (!x.certainly_positive()) return RealBall::whole(x.precision());
  return monotone(x, mpfr_log, true);
}

RealBall log2(const RealBall& x) {
  if (!x.certainly_positive()) return RealBall::whole(x.precision());
  return monotone(x, mpfr_log2, true);
}

RealBall pow(const RealBall& base, const RealBall& e) {
  const Precision prec = joint(base, e);
  Float blo = base.lower();
  Float bhi = base.upper();
  if (bhi.sign() < 0) return RealBall::whole(prec);
  if (blo.sign() < 0) mpfr_set_zero(blo.get(), 1);
  const Float elo = e.lower();
  const Float ehi = e.upper();
  if (!blo.is_finite() || !bhi.is_finite() || !elo.is_finite() || !ehi.is_finite()) {
    return RealBall::whole(prec);
  }
  if (blo.is_zero() && elo.sign() <= 0) return RealBall::whole(prec);
  Float lo = Float::infinity(prec);
  Float hi = Float::infinity(prec);
  mpfr_neg(hi.get(), hi.get(), MPFR_RNDN);
  for (const Float* b : {&blo, &bhi}) {
    for (const Float* x : {&elo, &ehi}) {
      Float dn(prec);
      Float up(prec);
      mpfr_pow(dn.get(), b->get(), x->get(), MPFR_RNDD);
      mpfr_pow(up.get(), b->get(), x->get(), MPFR_RNDU);
      if (compare(dn, lo) < 0) lo = dn;
      if (compare(up, hi) > 0) hi = up;
    }
  }
  return RealBall::from_endpoints(lo, hi, prec);
}

RealBall pow_uint(const RealBall& base, unsigned long k) {
  RealBall result = RealBall::from_si(1, base.precision());
  RealBall square = base;
  while (k > 0) {
    if (k & 1UL) result = result * square;
    k >>= 1;
    if (k > 0) square = sqr(square);
  }
  return result;
}

RealBall max(const RealBall& a, const RealBall& b) {
  if (compare(a.lower(), b.upper()) >= 0) return a;
  if (compare(b.lower(), a.upper()) >= 0) return b;
  const Precision prec = joint(a, b);
  Float lo(prec);
  Float hi(prec);
  mpfr_max(lo.get(), a.lower().get(), b.lower().get(), MPFR_RNDD);
  mpfr_max(hi.get(), a.upper().get(), b.upper().get(), MPFR_RNDU);
  return RealBall::from_endpoints(lo, hi, prec);
}

RealBall min(const RealBall& a, const RealBall& b) {
  if (compare(a.upper(), b.lower()) <= 0) return a;
  if (compare(b.upper(), a.lower()) <= 0) return b;
  const Precision prec = joint(a, b);
  Float lo(prec);
  Float hi(prec);
  mpfr_min(lo.get(), a.lower().get(), b.lower().get(), MPFR_RNDD);
  mpfr_min(hi.get(), a.upper().get(), b.upper().get(), MPFR_RNDU);
  return RealBall::from_endpoints(lo, hi, prec);
}

RealBall hull(const RealBall& a, const RealBall& b) {
  const Precision prec = joint(a, b);
  Float lo(prec);
  Float hi(prec);
  mpfr_min(lo.get(), a.lower().get(), b.lower().get(), MPFR_RNDD);
  mpfr_max(hi.get(), a.upper().get(), b.upper().get(), MPFR_RNDU);
  return RealBall::from_endpoints(lo, hi, prec);
}

Certainty less(const RealBall& a, const RealBall& b) {
  if (compare(a.upper(), b.lower()) < 0) return Certainty::certain;
  if (compare(a.lower(), b.upper()) >= 0) return Certainty::refuted;
  return Certainty::unknown;
}

Certainty less_equal(const RealBall& a, const RealBall& b) {
  if (compare(a.upper(), b.lower()) <= 0) return Certainty::certain;
  if (compare(a.lower(), b.upper()) > 0) return Certainty::refuted;
  return Certainty::unknown;
}

// ---------------------------------------------------------- ComplexBall

ComplexBall::ComplexBall(RealBall re) : re_(std::move(re)), im_(re_.precision()) {}

ComplexBall::ComplexBall(RealBall re, RealBall im) : re_(std::move(re)), im_(std::move(im)) {}

ComplexBall ComplexBall::from_rationals(const mpq_class& re, const mpq_class& im, Precision prec) {
  return ComplexBall(RealBall::from_rational(re, prec), RealBall::from_rational(im, prec));
}

Precision ComplexBall::precision() const noexcept {
  return std::max(re_.precision(), im_.precision());
}

RealBall ComplexBall::abs() const {
  if (im_.is_exact() && im_.mid().is_zero()) return prodcert::abs(re_);
  if (re_.is_exact() && re_.mid().is_zero()) return prodcert::abs(im_);
  return sqrt_nonneg(sqr(re_) + sqr(im_));
}

Float ComplexBall::radius() const {
  Float a = mul_up(re_.rad(), re_.rad());
  Float b = mul_up(im_.rad(), im_.rad());
  Float s = add_up(a, b);
  Float out(kRadiusPrecision);
  mpfr_sqrt(out.get(), s.get(), MPFR_RNDU);
  return out;
}

bool ComplexBall::contains_zero() const { return re_.contains_zero() && im_.contains_zero(); }

bool ComplexBall::overlaps(const ComplexBall& other) const {
  return re_.overlaps(other.re_) && im_.overlaps(other.im_);
}

bool ComplexBall::contains(const ComplexBall& other) const {
  return re_.contains(other.re_) && im_.contains(other.im_);
}

ComplexBall ComplexBall::conj() const { return ComplexBall(re_, -im_); }

ComplexBall ComplexBall::operator-() const { return ComplexBall(-re_, -im_); }

ComplexBall& ComplexBall::operator+=(const ComplexBall& other) { return *this = *this + other; }
ComplexBall& ComplexBall::operator*=(const ComplexBall& other) { return *this = *this * other; }

std::string ComplexBall::to_string(int digits) const {
  return "(" + re_.to_string(digits) + "," + im_.to_string(digits) + ")";
}

ComplexBall operator+(const ComplexBall& a, const ComplexBall& b) {
  return ComplexBall(a.re() + b.re(), a.im() + b.im());
}

ComplexBall operator-(const ComplexBall& a, const ComplexBall& b) {
  return ComplexBall(a.re() - b.re(), a.im() - b.im());
}

ComplexBall operator*(const ComplexBall& a, const ComplexBall& b) {
  if (a.is_real()) return ComplexBall(a.re() * b.re(), a.re() * b.im());
  if (b.is_real()) return ComplexBall(a.re() * b.re(), a.im() * b.re());
  return ComplexBall(a.re() * b.re() - a.im() * b.im(), a.re() * b.im() + a.im() * b.re());
}

ComplexBall operator*(const ComplexBall& a, const RealBall& b) {
  return ComplexBall(a.re() * b, a.im() * b);
}

ComplexBall operator/(const ComplexBall& a, const RealBall& b) {
  return ComplexBall(a.re() / b, a.im() / b);
}

ComplexBall operator/(const ComplexBall& a, const ComplexBall& b) {
  if (b.is_real()) return a / b.re();
  if (b.re().is_exact() && b.re().mid().is_zero()) {
    // (x + iy) / (i d) = y/d - i x/d
    return ComplexBall(a.im() / b.im(), -(a.re() / b.im()));
  }
  const RealBall norm = sqr(b.re()) + sqr(b.im());
  return (a * b.conj()) / norm;
}

ComplexBall pow_uint(const ComplexBall& base, unsigned long k) {
  ComplexBall result(RealBall::from_si(1, base.precision()));
  ComplexBall square = base;
  while (k > 0) {
    if (k & 1UL) result = result * square;
    k >>= 1;
    if (k > 0) square = square * square;
  }
  return result;
}

}  // namespace prodcert
