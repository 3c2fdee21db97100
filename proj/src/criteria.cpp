#include "prodcert/criteria.hpp"

#include <functional>
#include <map>
#include <sstream>

#include "prodcert/error.hpp"
#include "prodcert/observables.hpp"

namespace prodcert {

namespace {

using Decide = std::function<Certainty(Precision)>;

Certainty decide(Precision prec, const Decide& f) {
  const Certainty c = f(prec);
  return c == Certainty::unknown ? f(2 * prec) : c;
}

// Folds per-index outcomes into one verdict, keeping the first witness of
// the worst outcome.
class Tally {
 public:
  void add(Certainty c, const std::string& where) {
    const Verdict v = c == Certainty::certain ? Verdict::verified
                      : c == Certainty::refuted ? Verdict::failed
                                                : Verdict::inconclusive;
    if (worst(verdict_, v) != verdict_) {
      verdict_ = v;
      witness_ = where;
    }
    ++count_;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }

  HypothesisCheck result(std::string id) const {
    std::string w = witness_;
    if (w.empty()) w = std::to_string(count_) + " indices";
    if (!notes_.empty()) w += "; " + notes_;
    return HypothesisCheck{std::move(id), count_ == 0 ? Verdict::inconclusive : verdict_, w};
  }

 private:
  Verdict verdict_ = Verdict::verified;
  std::string witness_;
  std::string notes_;
  long count_ = 0;
};

std::string sides(const std::string& where, const RealBall& lhs, const RealBall& rhs) {
  return where + ": lhs=" + short_string(lhs) + " rhs=" + short_string(rhs);
}

std::string at_n(long n) { return "n=" + std::to_string(n); }
std::string at_nm(long n, long m) { return "(n,m)=(" + std::to_string(n) + "," + std::to_string(m) + ")"; }

HypothesisCheck asymptotic(const std::string& id, const std::set<std::string>& asserted, const std::string& what) {
  if (asserted.count(id)) return HypothesisCheck{id, Verdict::asserted, what};
  return HypothesisCheck{id, Verdict::inconclusive, what + " (not provable from a prefix; assert it to accept)"};
}

void require_integers(const Term& t) {
  if (!t.is_algebraic_integer()) {
    throw Error(ErrorKind::NonIntegerAlpha, "criteria.check", "alpha is not an algebraic integer",
                t.m == 0 ? at_n(t.n) : at_nm(t.n, t.m));
  }
}

// Strictly increasing on the last ceil(N/2) entries.
HypothesisCheck increasing_tail(const std::string& id, const std::vector<RealBall>& logs) {
  Tally tally;
  const long N = static_cast<long>(logs.size());
  const long k = (N + 1) / 2;
  for (long n = N - k + 2; n <= N; ++n) {
    const auto& prev = logs[static_cast<std::size_t>(n - 2)];
    const auto& cur = logs[static_cast<std::size_t>(n - 1)];
    tally.add(less(prev, cur), at_n(n) + ": log2 H_{n-1}=" + short_string(prev) + " log2 H_n=" + short_string(cur));
  }
  std::ostringstream w;
  w << "H_" << (N - k + 1) << ".." << N << " =";
  for (long n = N - k + 1; n <= N; ++n) w << " " << magnitude_string(logs[static_cast<std::size_t>(n - 1)], 8);
  tally.note(w.str());
  return tally.result(id);
}

// (1+eps) log2 n < log2 |alpha| (strict) or <= (non-strict), exact for small
// rational integers.
Certainty exceeds_power(const Term& t, long n, const mpq_class& exponent, bool strict, Precision prec) {
  if (t.integer && t.integer->is_exact()) {
    const mpz_class a = abs(t.integer->exact());
    const unsigned long p = exponent.get_num().get_ui();
    const unsigned long q = exponent.get_den().get_ui();
    if (exponent.get_num().fits_ulong_p() && exponent.get_den().fits_ulong_p() &&
        mpz_sizeinbase(a.get_mpz_t(), 2) * q <= (1ul << 20) && 64 * p <= (1ul << 20)) {
      mpz_class lhs;
      mpz_class rhs;
      mpz_pow_ui(lhs.get_mpz_t(), a.get_mpz_t(), q);
      mpz_ui_pow_ui(rhs.get_mpz_t(), static_cast<unsigned long>(n), p);
      const bool ok = strict ? rhs < lhs : rhs <= lhs;
      return ok ? Certainty::certain : Certainty::refuted;
    }
  }
  return decide(prec, [&](Precision p) {
    const RealBall rhs = RealBall::from_rational(exponent, p) * log2(RealBall::from_si(n, p));
    const RealBall lhs = log2_abs_alpha(t, p);
    return strict ? less(rhs, lhs) : less_equal(rhs, lhs);
  });
}

Certainty of(bool b) { return b ? Certainty::certain : Certainty::refuted; }

Certainty negate(Certainty c) {
  return c == Certainty::certain ? Certainty::refuted : c == Certainty::refuted ? Certainty::certain : c;
}

Certainty on_balls(const Term& t, Precision prec, const std::function<Certainty(const ComplexBall&, Precision)>& f) {
  return decide(prec, [&](Precision p) { return f(approximate(*t.algebraic, p), p); });
}

Certainty re_nonneg(const Term& t, const Parts& parts, Precision prec) {
  if (t.integer) return of(t.integer->sign() > 0);
  if (parts.re) return of(*parts.re >= 0);
  return on_balls(t, prec, [](const ComplexBall& z, Precision p) { return less_equal(RealBall(p), z.re()); });
}

Certainty e_im_nonneg(const Term& t, const Parts& parts, int e, Precision prec) {
  if (parts.im_sign) return of(e * *parts.im_sign >= 0);
  return on_balls(t, prec, [e](const ComplexBall& z, Precision p) {
    return less_equal(RealBall(p), e > 0 ? z.im() : -z.im());
  });
}

Certainty e_im_ge_abs_re(const Term& t, const Parts& parts, int e, Precision prec) {
  if (t.integer) return Certainty::refuted;
  if (parts.re && parts.im2 && parts.im_sign) {
    return of(e * *parts.im_sign >= 0 && *parts.im2 >= *parts.re * *parts.re);
  }
  return on_balls(t, prec, [e](const ComplexBall& z, Precision) {
    return less_equal(abs(z.re()), e > 0 ? z.im() : -z.im());
  });
}

Certainty re_ge_abs_im(const Term& t, const Parts& parts, Precision prec) {
  if (t.integer) return of(t.integer->sign() > 0);
  if (parts.re && parts.im2) return of(*parts.re >= 0 && *parts.re * *parts.re >= *parts.im2);
  if (parts.im2 && *parts.im2 == 0) return re_nonneg(t, parts, prec);
  return on_balls(t, prec, [](const ComplexBall& z, Precision) { return less_equal(abs(z.im()), z.re()); });
}

Certainty abs_im_le_r_abs_re(const Term& t, const Parts& parts, const mpq_class& R, Precision prec) {
  if (parts.im2 && *parts.im2 == 0) return Certainty::certain;
  if (parts.re && parts.im2) return of(*parts.im2 <= R * R * *parts.re * *parts.re);
  return on_balls(t, prec, [&R](const ComplexBall& z, Precision p) {
    return less_equal(abs(z.im()), RealBall::from_rational(R, p) * abs(z.re()));
  });
}

Certainty both(Certainty a, Certainty b) {
  if (a == Certainty::refuted || b == Certainty::refuted) return Certainty::refuted;
  if (a == Certainty::unknown || b == Certainty::unknown) return Certainty::unknown;
  return Certainty::certain;
}

using Triangle = std::map<std::pair<long, long>, Term>;

Triangle triangle(const ArraySpec& spec, long N) {
  Triangle t;
  for (long s = 2; s <= N + 1; ++s) {
    for (long n = 1; n < s; ++n) {
      const long m = s - n;
      if (spec.present(n, m)) t.emplace(std::make_pair(n, m), spec.term(n, m));
    }
  }
  return t;
}

const Term& entry(const Triangle& t, long n, long m) {
  const auto it = t.find({n, m});
  if (it == t.end()) {
    throw Error(ErrorKind::InvalidArgument, "criteria.check_theorem2", "entry outside the finite array", at_nm(n, m));
  }
  return it->second;
}

// Adjoins `alpha` to the tracked tower; returns the relative degree or
// nothing once the cap is hit.
std::optional<int> adjoin(std::vector<AlgebraicNumber>& tower, const AlgebraicNumber& alpha, int cap) {
  try {
    const int d = degree_over(alpha, tower, cap);
    if (d > 1) tower.push_back(alpha);
    return d;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegreeCapExceeded) throw;
    return std::nullopt;
  }
}

}  // namespace

std::string_view to_string(DegreeSource s) { return s == DegreeSource::verified ? "verified" : "declared"; }

TowerInfo tower_info(const SequenceSpec& spec, long N) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "criteria.tower_info", "N must be >= 1");
  TowerInfo info;
  std::vector<AlgebraicNumber> tower;
  bool tracking = true;
  mpz_class D = 1;
  const long last = spec.length ? std::min(N, *spec.length) : N;
  for (long n = 1; n <= N; ++n) {
    int d = 1;
    DegreeSource src = DegreeSource::verified;
    if (n <= last) {
      const Term t = spec.term(n);
      if (t.algebraic) {
        std::optional<int> got;
        if (tracking) got = adjoin(tower, *t.algebraic, spec.degree_cap);
        if (got) {
          d = *got;
        } else {
          tracking = false;
          if (static_cast<long>(spec.declared_degrees.size()) < n) {
            throw Error(ErrorKind::MissingDegrees, "criteria.tower_info",
                        "degree cap exceeded and no declared degree", at_n(n));
          }
          d = spec.declared_degrees[static_cast<std::size_t>(n - 1)];
          src = DegreeSource::declared;
        }
      }
    }
    D *= d;
    info.d.push_back(d);
    info.D.push_back(D);
    info.source.push_back(src);
  }
  return info;
}

TowerInfo tower_info(const ArraySpec& spec, long N) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "criteria.tower_info", "N must be >= 1");
  TowerInfo info;
  std::vector<AlgebraicNumber> tower;
  bool tracking = true;
  mpz_class D = 1;
  for (long s = 1; s <= N; ++s) {
    int d = 1;
    bool declared = false;
    for (long n = 1; n <= s && !declared; ++n) {
      const long m = s + 1 - n;
      if (!spec.present(n, m)) continue;
      const Term t = spec.term(n, m);
      if (!t.algebraic) continue;
      std::optional<int> got;
      if (tracking) got = adjoin(tower, *t.algebraic, spec.degree_cap);
      if (got) d *= *got;
      else declared = true;
    }
    if (declared || !tracking) {
      tracking = false;
      if (static_cast<long>(spec.declared_degrees.size()) < s) {
        throw Error(ErrorKind::MissingDegrees, "criteria.tower_info", "degree cap exceeded and no declared D_n",
                    at_n(s));
      }
      const mpz_class Dn = spec.declared_degrees[static_cast<std::size_t>(s - 1)];
      if (Dn % D != 0) {
        throw Error(ErrorKind::SchemaError, "criteria.tower_info", "declared D_n is not a multiple of D_{n-1}",
                    at_n(s));
      }
      d = static_cast<int>(mpz_class(Dn / D).get_si());
      D = Dn;
      info.source.push_back(DegreeSource::declared);
    } else {
      D *= d;
      info.source.push_back(DegreeSource::verified);
    }
    info.d.push_back(d);
    info.D.push_back(D);
  }
  return info;
}

std::vector<RealBall> growth_log2(const SequenceSpec& spec, const TowerInfo& tower, long N, Precision prec) {
  std::vector<RealBall> out;
  mpz_class D_pow = spec.D;
  mpz_class prod = 1;
  const long last = spec.length ? std::min(N, *spec.length) : N;
  for (long n = 1; n <= last; ++n) {
    const mpz_class den = D_pow * prod;
    out.push_back(log2_abs_alpha(spec.term(n), prec) / RealBall::from_integer(den, prec));
    D_pow *= spec.D;
    prod *= tower.D[static_cast<std::size_t>(n - 1)] + tower.d[static_cast<std::size_t>(n - 1)];
  }
  return out;
}

std::vector<RealBall> growth_log2(const ArraySpec& spec, const TowerInfo& tower, long N, Precision prec) {
  std::vector<RealBall> out;
  mpz_class D_pow = spec.D;
  mpz_class fact = 1;
  mpz_class prod = 1;
  for (long n = 1; n <= N && spec.present(n, 1); ++n) {
    fact *= n;
    const mpz_class den = D_pow * fact * prod;
    out.push_back(log2_abs_alpha(spec.term(n, 1), prec) / RealBall::from_integer(den, prec));
    D_pow *= spec.D;
    prod *= tower.D[static_cast<std::size_t>(n - 1)];
  }
  return out;
}

std::vector<RealBall> growth_sequence(const SequenceSpec& spec, long N, Precision prec) {
  std::vector<RealBall> out;
  for (const auto& l : growth_log2(spec, tower_info(spec, N), N, prec)) out.push_back(exp2(l));
  return out;
}

std::vector<RealBall> growth_sequence(const ArraySpec& spec, long N, Precision prec) {
  std::vector<RealBall> out;
  for (const auto& l : growth_log2(spec, tower_info(spec, N), N, prec)) out.push_back(exp2(l));
  return out;
}

const HypothesisCheck* Certificate::find(const std::string& id) const {
  for (const auto& c : checks) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

void conclude(Certificate& c) {
  c.certified = true;
  for (const auto& h : c.checks) {
    if (h.verdict != Verdict::verified && h.verdict != Verdict::asserted) c.certified = false;
  }
}

Certificate check_theorem1(const SequenceSpec& spec, long N, Precision prec) {
  if (N < 2) throw Error(ErrorKind::InvalidArgument, "criteria.check_theorem1", "N must be >= 2");
  const std::vector<Term> terms = spec.terms(N);
  if (static_cast<long>(terms.size()) < 2) {
    throw Error(ErrorKind::InvalidArgument, "criteria.check_theorem1", "fewer than two terms");
  }
  for (const auto& t : terms) require_integers(t);

  Certificate cert;
  cert.theorem = 1;
  cert.D = spec.D;
  cert.prefix_N = static_cast<long>(terms.size());
  cert.tower = tower_info(spec, cert.prefix_N);

  {
    Tally tally;
    const RealBall a_exp = RealBall::from_rational(spec.a, prec);
    for (const auto& t : terms) {
      RealBall lhs;
      RealBall rhs;
      const Certainty c = decide(prec, [&](Precision p) {
        const RealBall L = log2_abs_alpha(t, p);
        lhs = log2_house(t, p) + log2_b(t, p);
        rhs = L + pow(L, a_exp.with_precision(p));
        return less_equal(lhs, rhs);
      });
      tally.add(c, sides(at_n(t.n) + " log2(house*b) vs log2|alpha| + log2^a|alpha|", lhs, rhs));
    }
    cert.checks.push_back(tally.result("h1"));
  }
  {
    Tally tally;
    for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
      tally.add(abs_less(terms[i], terms[i + 1], prec), at_n(terms[i + 1].n) + ": |alpha_n| <= |alpha_{n-1}|");
    }
    cert.checks.push_back(tally.result("h2"));
  }
  {
    Tally tally;
    const long start = spec.start_of("h3");
    const mpq_class exponent = 1 + spec.epsilon;
    for (const auto& t : terms) {
      if (t.n < start) continue;
      tally.add(exceeds_power(t, t.n, exponent, true, prec), at_n(t.n) + ": |alpha_n| <= n^(1+eps)");
    }
    if (start > 1) tally.note("indices below " + std::to_string(start) + " skipped");
    cert.checks.push_back(tally.result("h3"));
  }
  {
    Tally tally;
    long strict = 0;
    for (const auto& t : terms) {
      // e (Re(alpha/b) + 1/2) >= 0
      RatioSign c = re_ratio_versus(t, parts_of(t, prec), mpq_class(-1, 2), prec);
      if (spec.e < 0) {
        const RatioSign le = c;
        c.ge = negate(le.gt);
        c.gt = negate(le.ge);
      }
      tally.add(c.ge, at_n(t.n) + ": e(Re(alpha/b)+1/2) < 0");
      if (c.gt == Certainty::certain) ++strict;
    }
    tally.note("strict at " + std::to_string(strict) + " indices");
    HypothesisCheck h = tally.result("h4");
    if (strict == 0 && h.verdict == Verdict::verified) {
      h = asymptotic("h4", spec.asserted, "never strict on the prefix");
    }
    cert.checks.push_back(h);
    cert.checks.push_back(asymptotic("h4.infinitely_often", spec.asserted, "strict for infinitely many n"));
  }
  cert.growth = growth_log2(spec, cert.tower, cert.prefix_N, prec);
  cert.checks.push_back(increasing_tail("h5", cert.growth));
  cert.checks.push_back(asymptotic("h5.divergence", spec.asserted, "H_n tends to infinity"));
  conclude(cert);
  return cert;
}

SignRecord sign_condition_check(const ArraySpec& spec, long N, Precision prec) {
  if (spec.sign_mode == SignMode::IV && (!spec.X || !spec.R)) {
    throw Error(ErrorKind::ModeParamsMissing, "criteria.sign_condition_check", "mode IV needs X and R");
  }
  SignRecord rec;
  rec.mode = spec.sign_mode;
  const Triangle tri = triangle(spec, N);
  Tally tally;
  const long start = spec.start_of("g4");
  mpq_class floor_re;
  if (spec.sign_mode == SignMode::IV) floor_re = mpq_class(-1) / (2 * (1 - *spec.X * *spec.R));

  for (const auto& [key, t] : tri) {
    const std::string where = at_nm(key.first, key.second);
    Certainty ok = Certainty::certain;
    const Parts parts = parts_of(t, prec);
    switch (spec.sign_mode) {
      case SignMode::main:
        ok = both(re_nonneg(t, parts, prec), e_im_nonneg(t, parts, spec.e, prec));
        break;
      case SignMode::I: {
        const RatioSign c = re_ratio_versus(t, parts, 0, prec);
        ok = both(c.ge, e_im_nonneg(t, parts, spec.e, prec));
        break;
      }
      case SignMode::II: {
        ok = e_im_ge_abs_re(t, parts, spec.e, prec);
        if (key.first + key.second >= start) {
          const RatioSign c = re_ratio_versus(t, parts, mpq_class(-1, 2), prec);
          ok = both(ok, c.ge);
          if (c.gt == Certainty::certain) ++rec.strict_count;
        }
        break;
      }
      case SignMode::III:
        ok = re_ge_abs_im(t, parts, prec);
        break;
      case SignMode::IV: {
        const RatioSign c = re_ratio_versus(t, parts, floor_re, prec);
        // Re(alpha/b) <= floor is the negation of Re(alpha/b) > floor.
        ok = both(negate(c.gt), abs_im_le_r_abs_re(t, parts, *spec.R, prec));
        break;
      }
    }
    tally.add(ok, where + ": sign condition of mode " + std::string(to_string(spec.sign_mode)));
    ++rec.pairs_checked;
  }

  if (spec.sign_mode == SignMode::IV) {
    const RealBall logX = log2(RealBall::from_rational(*spec.X, prec));
    for (long m = 1; m <= N; ++m) {
      std::vector<RealBall> logs;
      for (long n = 1; n + m <= N + 1; ++n) {
        if (tri.count({n, m})) logs.push_back(log2_abs_ratio(entry(tri, n, m), prec));
      }
      if (logs.empty()) continue;
      const RealBall s = log2_sum(logs);
      tally.add(less_equal(s, logX), sides("column m=" + std::to_string(m) + " log2 sum b/|alpha| vs log2 X", s, logX));
    }
  }

  switch (spec.sign_mode) {
    case SignMode::main:
    case SignMode::I:
    case SignMode::III: rec.C0 = 1; break;
    case SignMode::II: rec.C0 = mpq_class(1, 2); break;
    case SignMode::IV: rec.C0 = 1 - *spec.X; break;
  }
  if (spec.sign_mode == SignMode::II) tally.note("strict at " + std::to_string(rec.strict_count) + " pairs");
  const HypothesisCheck h = tally.result("g4");
  rec.verdict = h.verdict;
  rec.witness = h.witness;
  if (spec.sign_mode == SignMode::II && rec.strict_count == 0 && rec.verdict == Verdict::verified) {
    rec.verdict = Verdict::asserted;
    rec.needs_assertion = true;
    rec.witness += "; asserted-required: no strict pair on the prefix";
  }
  return rec;
}

Certificate check_theorem2(const ArraySpec& spec, long N, Precision prec) {
  if (N < 2) throw Error(ErrorKind::InvalidArgument, "criteria.check_theorem2", "N must be >= 2");
  const Triangle tri = triangle(spec, N);
  for (const auto& [key, t] : tri) require_integers(t);
  if (spec.sign_mode == SignMode::IV && (!spec.X || !spec.R)) {
    throw Error(ErrorKind::ModeParamsMissing, "criteria.check_theorem2", "mode IV needs X and R");
  }
  long rows = 0;
  while (rows < N && tri.count({rows + 1, 1})) ++rows;
  if (rows < 2) throw Error(ErrorKind::InvalidArgument, "criteria.check_theorem2", "fewer than two rows");

  Certificate cert;
  cert.theorem = 2;
  cert.D = spec.D;
  cert.prefix_N = rows;
  cert.tower = tower_info(spec, rows);
  const mpq_class loglog_exp = 3 + spec.epsilon;

  {
    Tally tally;
    for (long n = 1; n < rows; ++n) {
      tally.add(abs_less(entry(tri, n, 1), entry(tri, n + 1, 1), prec),
                at_n(n + 1) + ": |alpha_{n,1}| <= |alpha_{n-1,1}|");
    }
    const long start = spec.start_of("g1");
    for (long n = start; n <= rows; ++n) {
      tally.add(exceeds_power(entry(tri, n, 1), n, 1 + spec.epsilon, false, prec),
                at_n(n) + ": n^(1+eps) > |alpha_{n,1}|");
    }
    if (start > 1) tally.note("growth bound from n=" + std::to_string(start));
    cert.checks.push_back(tally.result("g1"));
  }

  auto diagonal_check = [&](const std::string& id, bool products) {
    Tally tally;
    const long start = spec.start_of(id);
    for (long n = start; n <= rows; ++n) {
      RealBall lhs;
      RealBall rhs;
      bool guarded = false;
      const Certainty c = decide(prec, [&](Precision p) {
        const RealBall L = log2_abs_alpha(entry(tri, n, 1), p);
        const auto power = loglog_power(L, loglog_exp);
        if (!power) {
          guarded = true;
          return Certainty::unknown;
        }
        std::vector<RealBall> logs;
        RealBall sum_house(p);
        for (long j = 1; j <= n; ++j) {
          const Term& t = entry(tri, n - j + 1, j);
          if (products) sum_house += log2_house(t, p);
          else logs.push_back(log2_abs_ratio(t, p));
        }
        if (products) {
          lhs = sum_house;
          rhs = L * (RealBall::from_si(n, p) + *power);
        } else {
          lhs = log2_sum(logs);
          rhs = L * (*power - RealBall::from_si(1, p));
        }
        return less_equal(lhs, rhs);
      });
      if (guarded) tally.add(Certainty::unknown, at_n(n) + ": ln ln |alpha_{n,1}| <= 0, bound undefined");
      else tally.add(c, sides(at_n(n) + (products ? " log2 prod house" : " log2 sum |b/alpha|"), lhs, rhs));
    }
    if (start > 1) tally.note("indices below " + std::to_string(start) + " skipped");
    return tally.result(id);
  };
  cert.checks.push_back(diagonal_check("g2", false));
  cert.checks.push_back(diagonal_check("g3", true));

  const SignRecord sign = sign_condition_check(spec, rows, prec);
  HypothesisCheck g4{"g4", sign.verdict, sign.witness + "; C0=" + sign.C0.get_str()};
  if (sign.needs_assertion) {
    g4.verdict = spec.asserted.count("g4") ? Verdict::asserted : Verdict::inconclusive;
  }
  cert.checks.push_back(g4);
  if (spec.sign_mode == SignMode::II) {
    cert.checks.push_back(asymptotic("g4.infinitely_often", spec.asserted, "strict for infinitely many pairs"));
  }

  cert.growth = growth_log2(spec, cert.tower, rows, prec);
  cert.checks.push_back(increasing_tail("g5", cert.growth));
  cert.checks.push_back(asymptotic("g5.limsup", spec.asserted, "limsup of the growth sequence is infinite"));
  conclude(cert);
  return cert;
}

}  // namespace prodcert
