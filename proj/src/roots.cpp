#include "prodcert/roots.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "prodcert/error.hpp"

namespace prodcert {

Precision precision_cap() {
  static const Precision cap = [] {
    if (const char* env = std::getenv("PRODCERT_PRECISION_CAP")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && v >= 64) return static_cast<Precision>(v);
    }
    return static_cast<Precision>(65536);
  }();
  return cap;
}

namespace {

// Plain (non-validated) complex arithmetic for the iteration itself.
struct Cx {
  Float re;
  Float im;
  explicit Cx(Precision p) : re(p), im(p) {}
};

void cx_mul(Cx& out, const Cx& a, const Cx& b, Float& t1, Float& t2) {
  mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  Float re(out.re.precision());
  mpfr_sub(re.get(), t1.get(), t2.get(), MPFR_RNDN);
  mpfr_mul(t1.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(out.im.get(), t1.get(), t2.get(), MPFR_RNDN);
  mpfr_swap(out.re.get(), re.get());
}

void cx_div(Cx& out, const Cx& a, const Cx& b, Float& t1, Float& t2) {
  const Precision p = out.re.precision();
  Float den(p);
  mpfr_sqr(t1.get(), b.re.get(), MPFR_RNDN);
  mpfr_sqr(t2.get(), b.im.get(), MPFR_RNDN);
  mpfr_add(den.get(), t1.get(), t2.get(), MPFR_RNDN);
  Cx conj(p);
  mpfr_set(conj.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_neg(conj.im.get(), b.im.get(), MPFR_RNDN);
  cx_mul(out, a, conj, t1, t2);
  mpfr_div(out.re.get(), out.re.get(), den.get(), MPFR_RNDN);
  mpfr_div(out.im.get(), out.im.get(), den.get(), MPFR_RNDN);
}

mpfr_exp_t magnitude_exp(const Cx& z) {
  mpfr_exp_t e = mpfr_get_emin_min();
  if (!z.re.is_zero()) e = std::max(e, mpfr_get_exp(z.re.get()));
  if (!z.im.is_zero()) e = std::max(e, mpfr_get_exp(z.im.get()));
  return e;
}

bool is_zero(const Cx& z) { return z.re.is_zero() && z.im.is_zero(); }

double log2_abs(const mpz_class& v) {
  long e = 0;
  const double d = mpz_get_d_2exp(&e, v.get_mpz_t());
  return std::log2(std::fabs(d)) + static_cast<double>(e);
}

std::vector<Cx> initial_points(const IntPoly& f, Precision w) {
  const int n = f.degree();
  const double lead = log2_abs(f.leading());
  double bound = -1e300;
  for (int i = 0; i < n; ++i) {
    const mpz_class c = f.coeff(static_cast<std::size_t>(i));
    if (c == 0) continue;
    double v = (log2_abs(c) - lead - (i == 0 ? 1.0 : 0.0)) / static_cast<double>(n - i);
    bound = std::max(bound, v);
  }
  if (bound < -1e299) bound = 0;
  const long radius_exp = static_cast<long>(std::ceil(bound));
  std::vector<Cx> z;
  z.reserve(static_cast<std::size_t>(n));
  Float pi(w);
  mpfr_const_pi(pi.get(), MPFR_RNDN);
  for (int k = 0; k < n; ++k) {
    Float angle(w);
    mpfr_mul_si(angle.get(), pi.get(), 2 * k, MPFR_RNDN);
    mpfr_div_si(angle.get(), angle.get(), n, MPFR_RNDN);
    Float offset(w);
    mpfr_set_d(offset.get(), 0.7, MPFR_RNDN);
    mpfr_add(angle.get(), angle.get(), offset.get(), MPFR_RNDN);
    Cx p(w);
    mpfr_sin_cos(p.im.get(), p.re.get(), angle.get(), MPFR_RNDN);
    mpfr_mul_2si(p.re.get(), p.re.get(), radius_exp, MPFR_RNDN);
    mpfr_mul_2si(p.im.get(), p.im.get(), radius_exp, MPFR_RNDN);
    z.push_back(std::move(p));
  }
  return z;
}

// Aberth-Ehrlich iteration in place; returns true on apparent convergence.
bool aberth(const IntPoly& f, std::vector<Cx>& z, Precision w, int max_iter) {
  const int n = f.degree();
  std::vector<Float> c;
  std::vector<Float> dc;
  for (int i = 0; i <= n; ++i) {
    c.push_back(Float::from_integer(f.coeff(static_cast<std::size_t>(i)), w));
    Float d(w);
    mpfr_mul_si(d.get(), c.back().get(), i, MPFR_RNDN);
    dc.push_back(std::move(d));
  }
  Float t1(w), t2(w);
  Cx p(w), dp(w), ratio(w), sum(w), diff(w), inv(w), corr(w), one(w), denom(w);
  mpfr_set_ui(one.re.get(), 1, MPFR_RNDN);
  for (int iter = 0; iter < max_iter; ++iter) {
    bool converged = true;
    for (int i = 0; i < n; ++i) {
      Cx& zi = z[static_cast<std::size_t>(i)];
      mpfr_set(p.re.get(), c[static_cast<std::size_t>(n)].get(), MPFR_RNDN);
      mpfr_set_zero(p.im.get(), 1);
      mpfr_set(dp.re.get(), dc[static_cast<std::size_t>(n)].get(), MPFR_RNDN);
      mpfr_set_zero(dp.im.get(), 1);
      for (int k = n - 1; k >= 0; --k) {
        cx_mul(p, p, zi, t1, t2);
        mpfr_add(p.re.get(), p.re.get(), c[static_cast<std::size_t>(k)].get(), MPFR_RNDN);
        if (k >= 1) {
          cx_mul(dp, dp, zi, t1, t2);
          mpfr_add(dp.re.get(), dp.re.get(), dc[static_cast<std::size_t>(k)].get(), MPFR_RNDN);
        }
      }
      if (is_zero(p)) continue;
      if (is_zero(dp)) {
        converged = false;
        mpfr_nextabove(zi.re.get());
        continue;
      }
      cx_div(ratio, p, dp, t1, t2);
      mpfr_set_zero(sum.re.get(), 1);
      mpfr_set_zero(sum.im.get(), 1);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const Cx& zj = z[static_cast<std::size_t>(j)];
        mpfr_sub(diff.re.get(), zi.re.get(), zj.re.get(), MPFR_RNDN);
        mpfr_sub(diff.im.get(), zi.im.get(), zj.im.get(), MPFR_RNDN);
        if (is_zero(diff)) {
          mpfr_nextabove(diff.re.get());
        }
        cx_div(inv, one, diff, t1, t2);
        mpfr_add(sum.re.get(), sum.re.get(), inv.re.get(), MPFR_RNDN);
        mpfr_add(sum.im.get(), sum.im.get(), inv.im.get(), MPFR_RNDN);
      }
      cx_mul(denom, ratio, sum, t1, t2);
      mpfr_ui_sub(denom.re.get(), 1, denom.re.get(), MPFR_RNDN);
      mpfr_neg(denom.im.get(), denom.im.get(), MPFR_RNDN);
      if (is_zero(denom)) {
        corr = ratio;
      } else {
        cx_div(corr, ratio, denom, t1, t2);
      }
      mpfr_sub(zi.re.get(), zi.re.get(), corr.re.get(), MPFR_RNDN);
      mpfr_sub(zi.im.get(), zi.im.get(), corr.im.get(), MPFR_RNDN);
      if (!is_zero(corr) && magnitude_exp(corr) > magnitude_exp(zi) - static_cast<mpfr_exp_t>(w) + 8) {
        converged = false;
      }
    }
    if (converged) return true;
  }
  return false;
}

ComplexBall exact_point(const Cx& z) {
  return ComplexBall(RealBall(z.re, Float()), RealBall(z.im, Float()));
}

bool separated(const ComplexBall& a, const ComplexBall& b, const Float& ra, const Float& rb,
               long factor_num, long factor_den) {
  RealBall dist = (a - b).abs();
  RealBall need = RealBall(ra, Float()) + RealBall(rb, Float());
  need = need * RealBall::from_si(factor_num, 64) / RealBall::from_si(factor_den, 64);
  return less(need, dist) == Certainty::certain;
}

// Returns false if the present approximations cannot be certified.
bool certify(const IntPoly& f, const std::vector<Cx>& z, Precision w, Precision target,
             std::vector<ComplexBall>& out) {
  const int n = f.degree();
  const auto un = static_cast<std::size_t>(n);
  std::vector<ComplexBall> centers;
  centers.reserve(un);
  for (const auto& p : z) centers.push_back(exact_point(p));
  const ComplexBall lead(RealBall::from_integer(f.leading(), w));
  std::vector<Float> radius(un);
  for (std::size_t i = 0; i < un; ++i) {
    ComplexBall value = f(centers[i]);
    ComplexBall prod = lead;
    for (std::size_t j = 0; j < un; ++j) {
      if (j == i) continue;
      prod = prod * (centers[i] - centers[j]);
    }
    if (prod.contains_zero()) return false;
    ComplexBall weier = value / prod;
    if (!weier.is_finite()) return false;
    Float mag = weier.abs().upper();
    Float r(kRadiusPrecision);
    mpfr_mul_si(r.get(), mag.get(), n, MPFR_RNDU);
    radius[i] = std::move(r);
  }
  for (std::size_t i = 0; i < un; ++i) {
    for (std::size_t j = i + 1; j < un; ++j) {
      if (!separated(centers[i], centers[j], radius[i], radius[j], 3, 2)) return false;
    }
  }
  const int parity = f.parity();
  out.clear();
  for (std::size_t i = 0; i < un; ++i) {
    const Float& r = radius[i];
    const RealBall& re = centers[i].re();
    const RealBall& im = centers[i].im();
    bool real = false;
    bool imaginary = false;
    if (mpfr_cmpabs(im.mid().get(), r.get()) <= 0) {
      const ComplexBall mirror = centers[i].conj();
      for (std::size_t j = 0; j < un; ++j) {
        if (j != i && !separated(mirror, centers[j], r, radius[j], 1, 1)) return false;
      }
      real = true;
    }
    if (parity != 0 && mpfr_cmpabs(re.mid().get(), r.get()) <= 0) {
      const ComplexBall mirror = -centers[i].conj();
      for (std::size_t j = 0; j < un; ++j) {
        if (j != i && !separated(mirror, centers[j], r, radius[j], 1, 1)) return false;
      }
      imaginary = true;
    }
    // Precision target per coordinate.
    Float scale(kRadiusPrecision);
    Float modulus = centers[i].abs().lower();
    mpfr_add_ui(scale.get(), modulus.get(), 1, MPFR_RNDD);
    mpfr_mul_2si(scale.get(), scale.get(), 1 - static_cast<long>(target), MPFR_RNDD);
    if (compare(r, scale) > 0) return false;
    RealBall box_re = imaginary ? RealBall(Float(w), Float()) : RealBall(re.mid(), r);
    RealBall box_im = real ? RealBall(Float(w), Float()) : RealBall(im.mid(), r);
    out.emplace_back(std::move(box_re), std::move(box_im));
  }
  return true;
}

std::vector<ComplexBall> isolate_uncached(const IntPoly& f, Precision prec) {
  const int n = f.degree();
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "algebra.isolate_roots", "degree < 1");
  if (n == 1) {
    const mpq_class root(-f.coeff(0), f.coeff(1));
    return {ComplexBall(RealBall::from_rational(root, std::max<Precision>(prec, 64)))};
  }
  const Precision cap = precision_cap();
  Precision w = 64;
  while (w < prec + 32) w *= 2;
  std::vector<Cx> z;
  std::vector<ComplexBall> out;
  for (; w <= cap; w *= 2) {
    if (z.empty()) {
      z = initial_points(f, w);
    } else {
      for (auto& p : z) {
        mpfr_prec_round(p.re.get(), w, MPFR_RNDN);
        mpfr_prec_round(p.im.get(), w, MPFR_RNDN);
      }
    }
    aberth(f, z, w, 400 + 40 * n);
    if (certify(f, z, w, prec, out)) return out;
    // A second pass at the same precision often finishes convergence.
    aberth(f, z, w, 400 + 40 * n);
    if (certify(f, z, w, prec, out)) return out;
  }
  throw Error(ErrorKind::PrecisionBudgetExceeded, "algebra.isolate_roots",
              "root isolation did not certify within the precision cap",
              f.to_string() + " at " + std::to_string(prec) + " bits");
}

}  // namespace

std::vector<ComplexBall> isolate_roots(const IntPoly& f, Precision prec) {
  static std::mutex mutex;
  static std::map<std::pair<std::string, Precision>, std::vector<ComplexBall>> cache;
  auto key = std::make_pair(f.to_string(), prec);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::vector<ComplexBall> roots = isolate_uncached(f, prec);
  std::lock_guard<std::mutex> lock(mutex);
  if (cache.size() > 4096) cache.clear();
  cache.emplace(std::move(key), roots);
  return roots;
}

}  // namespace prodcert
