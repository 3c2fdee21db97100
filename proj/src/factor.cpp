#include "prodcert/factor.hpp"

#include <algorithm>
#include <random>
#include <utility>

#include "prodcert/error.hpp"

namespace prodcert {

namespace {

// Polynomials over Z/MZ, coefficients in [0, M), lowest degree first.
using ModPoly = std::vector<mpz_class>;

void trim(ModPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const ModPoly& a) { return static_cast<int>(a.size()) - 1; }

void reduce_in_place(ModPoly& a, const mpz_class& m) {
  for (auto& v : a) mpz_mod(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  trim(a);
}

ModPoly reduce(const IntPoly& f, const mpz_class& m) {
  ModPoly out = f.coefficients();
  reduce_in_place(out, m);
  return out;
}

ModPoly add(const ModPoly& a, const ModPoly& b, const mpz_class& m) {
  ModPoly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i < a.size()) out[i] += a[i];
    if (i < b.size()) out[i] += b[i];
  }
  reduce_in_place(out, m);
  return out;
}

ModPoly sub(const ModPoly& a, const ModPoly& b, const mpz_class& m) {
  ModPoly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i < a.size()) out[i] += a[i];
    if (i < b.size()) out[i] -= b[i];
  }
  reduce_in_place(out, m);
  return out;
}

ModPoly mul(const ModPoly& a, const ModPoly& b, const mpz_class& m) {
  if (a.empty() || b.empty()) return {};
  ModPoly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  reduce_in_place(out, m);
  return out;
}

ModPoly scale(const ModPoly& a, const mpz_class& s, const mpz_class& m) {
  ModPoly out = a;
  for (auto& v : out) v *= s;
  reduce_in_place(out, m);
  return out;
}

mpz_class inverse(const mpz_class& a, const mpz_class& m) {
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw Error(ErrorKind::Internal, "algebra.factor", "non-invertible leading coefficient");
  }
  return inv;
}

// a = q b + r with deg r < deg b; lc(b) must be a unit mod m.
void divrem(const ModPoly& a, const ModPoly& b, const mpz_class& m, ModPoly& q, ModPoly& r) {
  r = a;
  q.clear();
  if (deg(a) < deg(b)) return;
  const mpz_class inv = inverse(b.back(), m);
  const std::size_t db = b.size() - 1;
  q.assign(a.size() - db, mpz_class(0));
  for (std::size_t k = q.size(); k-- > 0;) {
    mpz_class t = r[k + db] * inv;
    mpz_mod(t.get_mpz_t(), t.get_mpz_t(), m.get_mpz_t());
    q[k] = t;
    if (t == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) {
      mpz_submul(r[k + j].get_mpz_t(), t.get_mpz_t(), b[j].get_mpz_t());
      mpz_mod(r[k + j].get_mpz_t(), r[k + j].get_mpz_t(), m.get_mpz_t());
    }
  }
  r.resize(db);
  trim(r);
  trim(q);
}

ModPoly rem(const ModPoly& a, const ModPoly& b, const mpz_class& m) {
  ModPoly q;
  ModPoly r;
  divrem(a, b, m, q, r);
  return r;
}

ModPoly quo(const ModPoly& a, const ModPoly& b, const mpz_class& m) {
  ModPoly q;
  ModPoly r;
  divrem(a, b, m, q, r);
  return q;
}

ModPoly monic(const ModPoly& a, const mpz_class& p) {
  if (a.empty()) return a;
  return scale(a, inverse(a.back(), p), p);
}

ModPoly gcd_mod(ModPoly a, ModPoly b, const mpz_class& p) {
  while (!b.empty()) {
    ModPoly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a, p);
}

// s a + t b = 1 over F_p for coprime a, b.
void ext_gcd_mod(const ModPoly& a, const ModPoly& b, const mpz_class& p, ModPoly& s, ModPoly& t) {
  ModPoly r0 = a, r1 = b;
  ModPoly s0{1}, s1;
  ModPoly t0, t1{1};
  while (!r1.empty()) {
    ModPoly q;
    ModPoly r;
    divrem(r0, r1, p, q, r);
    ModPoly s2 = sub(s0, mul(q, s1, p), p);
    ModPoly t2 = sub(t0, mul(q, t1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (deg(r0) != 0) throw Error(ErrorKind::Internal, "algebra.factor", "factors not coprime mod p");
  const mpz_class inv = inverse(r0[0], p);
  s = scale(s0, inv, p);
  t = scale(t0, inv, p);
}

ModPoly powmod(const ModPoly& base, const mpz_class& e, const ModPoly& f, const mpz_class& p) {
  ModPoly result{1};
  ModPoly b = rem(base, f, p);
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = rem(mul(result, result, p), f, p);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = rem(mul(result, b, p), f, p);
  }
  return result;
}

struct DegreeBlock {
  ModPoly product;
  int degree;
};

std::vector<DegreeBlock> distinct_degree(ModPoly f, const mpz_class& p) {
  std::vector<DegreeBlock> out;
  const ModPoly x{0, 1};
  ModPoly h = rem(x, f, p);
  int i = 0;
  while (deg(f) >= 2 * (i + 1)) {
    ++i;
    h = powmod(h, p, f, p);
    ModPoly g = gcd_mod(f, sub(h, x, p), p);
    if (deg(g) > 0) {
      out.push_back({g, i});
      f = quo(f, g, p);
      h = rem(h, f, p);
    }
  }
  if (deg(f) > 0) out.push_back({monic(f, p), deg(f)});
  return out;
}

void equal_degree(const ModPoly& g, int d, const mpz_class& p, std::mt19937_64& rng,
                  std::vector<ModPoly>& out) {
  if (deg(g) == d) {
    out.push_back(g);
    return;
  }
  mpz_class pd;
  mpz_pow_ui(pd.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(d));
  const mpz_class e = (pd - 1) / 2;
  const unsigned long pu = p.get_ui();
  std::uniform_int_distribution<unsigned long> coef(0, pu - 1);
  for (;;) {
    ModPoly a(static_cast<std::size_t>(deg(g)));
    for (auto& v : a) v = coef(rng);
    trim(a);
    if (deg(a) < 1) continue;
    ModPoly b = sub(powmod(a, e, g, p), ModPoly{1}, p);
    ModPoly c = gcd_mod(g, b, p);
    if (deg(c) > 0 && deg(c) < deg(g)) {
      equal_degree(c, d, p, rng, out);
      equal_degree(monic(quo(g, c, p), p), d, p, rng, out);
      return;
    }
  }
}

// Quadratic Hensel step: from f = g h mod m (h monic, s g + t h = 1) to mod m^2.
void hensel_step(const ModPoly& f_int, ModPoly& g, ModPoly& h, ModPoly& s, ModPoly& t,
                 const mpz_class& m2) {
  ModPoly f = f_int;
  reduce_in_place(f, m2);
  ModPoly e = sub(f, mul(g, h, m2), m2);
  ModPoly q;
  ModPoly r;
  divrem(mul(s, e, m2), h, m2, q, r);
  ModPoly g2 = add(g, add(mul(t, e, m2), mul(q, g, m2), m2), m2);
  ModPoly h2 = add(h, r, m2);
  ModPoly b = sub(add(mul(s, g2, m2), mul(t, h2, m2), m2), ModPoly{1}, m2);
  ModPoly c;
  ModPoly d;
  divrem(mul(s, b, m2), h2, m2, c, d);
  s = sub(s, d, m2);
  t = sub(t, add(mul(t, b, m2), mul(c, g2, m2), m2), m2);
  g = std::move(g2);
  h = std::move(h2);
}

IntPoly symmetric(const ModPoly& a, const mpz_class& m) {
  const mpz_class half = m / 2;
  std::vector<mpz_class> out(a.begin(), a.end());
  for (auto& v : out) {
    if (v > half) v -= m;
  }
  return IntPoly(std::move(out));
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t r) {
  const std::size_t size = idx.size();
  for (std::size_t k = size; k-- > 0;) {
    if (idx[k] < r - size + k) {
      ++idx[k];
      for (std::size_t j = k + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

bool squarefree_mod(const ModPoly& f, const mpz_class& p) {
  ModPoly df(f.size() > 1 ? f.size() - 1 : 0);
  for (std::size_t i = 1; i < f.size(); ++i) df[i - 1] = f[i] * static_cast<unsigned long>(i);
  reduce_in_place(df, p);
  if (df.empty()) return false;
  return deg(gcd_mod(f, df, p)) == 0;
}

// f primitive, squarefree, f(0) != 0, degree >= 2.
std::vector<IntPoly> zassenhaus(const IntPoly& f) {
  const int n = f.degree();
  const mpz_class& lc = f.leading();

  mpz_class best_p = 0;
  std::size_t best_count = 0;
  std::vector<DegreeBlock> best_blocks;
  int good = 0;
  mpz_class p = 2;
  for (int tries = 0; good < 5 && tries < 400; ++tries) {
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    if (mpz_divisible_p(lc.get_mpz_t(), p.get_mpz_t())) continue;
    ModPoly fp = reduce(f, p);
    if (deg(fp) != n || !squarefree_mod(fp, p)) continue;
    ++good;
    auto blocks = distinct_degree(monic(fp, p), p);
    std::size_t count = 0;
    for (const auto& b : blocks) count += static_cast<std::size_t>(deg(b.product) / b.degree);
    if (best_p == 0 || count < best_count) {
      best_p = p;
      best_count = count;
      best_blocks = std::move(blocks);
    }
    if (count == 1) return {f};
  }
  if (best_p == 0) throw Error(ErrorKind::Internal, "algebra.factor", "no suitable prime");
  p = best_p;

  std::mt19937_64 rng(0x5eedULL);
  std::vector<ModPoly> modular;
  for (const auto& b : best_blocks) equal_degree(b.product, b.degree, p, rng, modular);

  // Lifting target: 2 |lc| 2^n ||f||_2 bounds lc times any factor's coefficients.
  mpz_class norm_sq = 0;
  for (const auto& c : f.coefficients()) norm_sq += c * c;
  mpz_class norm;
  mpz_sqrt(norm.get_mpz_t(), norm_sq.get_mpz_t());
  norm += 1;
  mpz_class bound = 2 * abs(lc) * norm;
  mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), static_cast<unsigned long>(n));

  mpz_class modulus = p;
  int doublings = 0;
  while (modulus <= bound) {
    modulus *= modulus;
    ++doublings;
  }

  const ModPoly f_int(f.coefficients().begin(), f.coefficients().end());
  std::vector<ModPoly> lifted;
  lifted.reserve(modular.size());
  const ModPoly fp = reduce(f, p);
  for (const auto& h0 : modular) {
    ModPoly h = h0;
    ModPoly g = quo(fp, h, p);
    ModPoly s;
    ModPoly t;
    ext_gcd_mod(g, h, p, s, t);
    mpz_class m = p;
    for (int k = 0; k < doublings; ++k) {
      const mpz_class m2 = m * m;
      hensel_step(f_int, g, h, s, t, m2);
      m = m2;
    }
    lifted.push_back(std::move(h));
  }

  std::vector<IntPoly> out;
  IntPoly rest = f;
  std::size_t size = 1;
  while (2 * size <= lifted.size()) {
    bool found = false;
    std::vector<std::size_t> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    const std::size_t r = lifted.size();
    for (;;) {
      ModPoly prod{mpz_class(rest.leading())};
      reduce_in_place(prod, modulus);
      for (std::size_t i : idx) prod = mul(prod, lifted[i], modulus);
      IntPoly cand = symmetric(prod, modulus).primitive_part();
      IntPoly q;
      if (cand.degree() > 0 && divide_exact(rest, cand, q)) {
        out.push_back(cand);
        rest = q.primitive_part();
        for (std::size_t i = size; i-- > 0;) lifted.erase(lifted.begin() + static_cast<long>(idx[i]));
        found = true;
        break;
      }
      if (!next_combination(idx, r)) break;
    }
    if (!found) ++size;
  }
  if (rest.degree() > 0) out.push_back(rest);
  return out;
}

}  // namespace

std::vector<IntPoly> irreducible_factors(const IntPoly& f) {
  if (f.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "algebra.factor", "zero polynomial");
  IntPoly p = f.primitive_part();
  std::vector<IntPoly> out;
  if (p.degree() < 1) return out;
  std::size_t shift = 0;
  while (p.coeff(shift) == 0) ++shift;
  if (shift > 0) {
    out.push_back(IntPoly{0, 1});
    std::vector<mpz_class> c(p.coefficients().begin() + static_cast<long>(shift), p.coefficients().end());
    p = IntPoly(std::move(c));
  }
  if (p.degree() >= 1) {
    IntPoly sq = squarefree_part(p);
    if (sq.degree() == 1) {
      out.push_back(sq);
    } else {
      for (auto& g : zassenhaus(sq)) out.push_back(g.primitive_part());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_irreducible(const IntPoly& f) {
  if (f.is_zero()) return false;
  IntPoly p = f.primitive_part();
  if (p.degree() < 1) return false;
  auto factors = irreducible_factors(p);
  return factors.size() == 1 && factors.front() == p;
}

}  // namespace prodcert
