#include "prodcert/poly.hpp"

#include <algorithm>
#include <utility>

#include "prodcert/error.hpp"

namespace prodcert {

IntPoly::IntPoly(std::vector<mpz_class> coefficients) : c_(std::move(coefficients)) {
  normalize();
}

IntPoly::IntPoly(std::initializer_list<long> coefficients) {
  c_.reserve(coefficients.size());
  for (long v : coefficients) c_.emplace_back(v);
  normalize();
}

IntPoly IntPoly::monomial(const mpz_class& coeff, std::size_t degree) {
  std::vector<mpz_class> c(degree + 1);
  c[degree] = coeff;
  return IntPoly(std::move(c));
}

void IntPoly::normalize() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

mpz_class IntPoly::coeff(std::size_t i) const { return i < c_.size() ? c_[i] : mpz_class(0); }

const mpz_class& IntPoly::leading() const {
  if (c_.empty()) throw Error(ErrorKind::ZeroPolynomial, "algebra.poly", "leading coefficient of 0");
  return c_.back();
}

mpz_class IntPoly::content() const {
  mpz_class g = 0;
  for (const auto& v : c_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

IntPoly IntPoly::primitive_part() const {
  if (c_.empty()) return {};
  mpz_class g = content();
  if (c_.back() < 0) g = -g;
  std::vector<mpz_class> out(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) mpz_divexact(out[i].get_mpz_t(), c_[i].get_mpz_t(), g.get_mpz_t());
  return IntPoly(std::move(out));
}

IntPoly IntPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<mpz_class> out(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) out[i - 1] = c_[i] * static_cast<unsigned long>(i);
  return IntPoly(std::move(out));
}

IntPoly IntPoly::reversed() const {
  std::vector<mpz_class> out(c_.rbegin(), c_.rend());
  return IntPoly(std::move(out));
}

IntPoly IntPoly::reflected() const {
  std::vector<mpz_class> out = c_;
  for (std::size_t i = 1; i < out.size(); i += 2) out[i] = -out[i];
  return IntPoly(std::move(out));
}

int IntPoly::parity() const {
  bool even = true;
  bool odd = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (i % 2 == 0) odd = false;
    else even = false;
  }
  if (even) return 1;
  if (odd) return -1;
  return 0;
}

mpz_class IntPoly::operator()(const mpz_class& x) const {
  mpz_class acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

mpq_class IntPoly::operator()(const mpq_class& x) const {
  mpq_class acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + mpq_class(*it);
  return acc;
}

ComplexBall IntPoly::operator()(const ComplexBall& x) const {
  const Precision prec = x.precision();
  ComplexBall acc{RealBall(prec)};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * x + ComplexBall(RealBall::from_integer(*it, prec));
  }
  return acc;
}

RealBall IntPoly::operator()(const RealBall& x) const {
  const Precision prec = x.precision();
  RealBall acc(prec);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * x + RealBall::from_integer(*it, prec);
  }
  return acc;
}

std::size_t IntPoly::height_bits() const {
  std::size_t bits = 0;
  for (const auto& v : c_) {
    if (v != 0) bits = std::max(bits, mpz_sizeinbase(v.get_mpz_t(), 2));
  }
  return bits;
}

std::string IntPoly::to_string() const {
  if (c_.empty()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const mpz_class& v = c_[static_cast<std::size_t>(i)];
    if (v == 0) continue;
    mpz_class mag = abs(v);
    if (out.empty()) {
      if (v < 0) out += "-";
    } else {
      out += v < 0 ? "-" : "+";
    }
    if (i == 0 || mag != 1) {
      out += mag.get_str();
      if (i > 0) out += "*";
    }
    if (i >= 1) out += "x";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

bool operator<(const IntPoly& a, const IntPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i) {
    const auto k = static_cast<std::size_t>(i);
    const int c = cmp(a.c_[k], b.c_[k]);
    if (c != 0) return c < 0;
  }
  return false;
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  const auto& ac = a.coefficients();
  const auto& bc = b.coefficients();
  std::vector<mpz_class> out(std::max(ac.size(), bc.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) + b.coeff(i);
  return IntPoly(std::move(out));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) {
  const auto& ac = a.coefficients();
  const auto& bc = b.coefficients();
  std::vector<mpz_class> out(std::max(ac.size(), bc.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) - b.coeff(i);
  return IntPoly(std::move(out));
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const auto& ac = a.coefficients();
  const auto& bc = b.coefficients();
  std::vector<mpz_class> out(ac.size() + bc.size() - 1);
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (ac[i] == 0) continue;
    for (std::size_t j = 0; j < bc.size(); ++j) {
      mpz_addmul(out[i + j].get_mpz_t(), ac[i].get_mpz_t(), bc[j].get_mpz_t());
    }
  }
  return IntPoly(std::move(out));
}

IntPoly operator*(const mpz_class& s, const IntPoly& a) {
  std::vector<mpz_class> out = a.coefficients();
  for (auto& v : out) v *= s;
  return IntPoly(std::move(out));
}

bool divide_exact(const IntPoly& a, const IntPoly& b, IntPoly& quotient) {
  if (b.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "algebra.divide_exact", "division by 0");
  if (a.is_zero()) {
    quotient = {};
    return true;
  }
  if (a.degree() < b.degree()) return false;
  std::vector<mpz_class> rem = a.coefficients();
  const auto& bc = b.coefficients();
  const mpz_class& lb = b.leading();
  const std::size_t db = bc.size() - 1;
  std::vector<mpz_class> q(rem.size() - db);
  for (std::size_t k = q.size(); k-- > 0;) {
    mpz_class& top = rem[k + db];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), lb.get_mpz_t())) return false;
    mpz_divexact(q[k].get_mpz_t(), top.get_mpz_t(), lb.get_mpz_t());
    for (std::size_t j = 0; j <= db; ++j) {
      mpz_submul(rem[k + j].get_mpz_t(), q[k].get_mpz_t(), bc[j].get_mpz_t());
    }
  }
  for (std::size_t i = 0; i < db; ++i) {
    if (rem[i] != 0) return false;
  }
  quotient = IntPoly(std::move(q));
  return true;
}

namespace {

// lc(b)^(deg a - deg b + 1) * a mod b.
IntPoly pseudo_remainder(const IntPoly& a, const IntPoly& b) {
  std::vector<mpz_class> r = a.coefficients();
  const auto& bc = b.coefficients();
  const std::size_t db = bc.size() - 1;
  const mpz_class& lb = b.leading();
  int steps = a.degree() - b.degree() + 1;
  while (r.size() > db && !r.empty()) {
    const mpz_class top = r.back();
    const std::size_t shift = r.size() - 1 - db;
    for (auto& v : r) v *= lb;
    for (std::size_t j = 0; j <= db; ++j) mpz_submul(r[shift + j].get_mpz_t(), top.get_mpz_t(), bc[j].get_mpz_t());
    r.pop_back();
    while (!r.empty() && r.back() == 0) r.pop_back();
    --steps;
  }
  if (steps > 0) {
    mpz_class f;
    mpz_pow_ui(f.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(steps));
    for (auto& v : r) v *= f;
  }
  return IntPoly(std::move(r));
}

mpz_class bareiss_determinant(std::vector<std::vector<mpz_class>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t pivot = k + 1;
      while (pivot < n && m[pivot][k] == 0) ++pivot;
      if (pivot == n) return 0;
      std::swap(m[k], m[pivot]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class t = m[i][j] * m[k][k];
        mpz_submul(t.get_mpz_t(), m[i][k].get_mpz_t(), m[k][j].get_mpz_t());
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : mpz_class(-m[n - 1][n - 1]);
}

}  // namespace

IntPoly gcd(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero()) return b.primitive_part();
  if (b.is_zero()) return a.primitive_part();
  IntPoly x = a.primitive_part();
  IntPoly y = b.primitive_part();
  if (x.degree() < y.degree()) std::swap(x, y);
  while (!y.is_zero()) {
    IntPoly r = pseudo_remainder(x, y);
    x = std::move(y);
    y = r.primitive_part();
  }
  return x.primitive_part();
}

IntPoly squarefree_part(const IntPoly& a) {
  if (a.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "algebra.squarefree_part", "zero polynomial");
  IntPoly p = a.primitive_part();
  if (p.degree() <= 1) return p;
  IntPoly g = gcd(p, p.derivative());
  IntPoly q;
  divide_exact(p, g, q);
  return q.primitive_part();
}

mpz_class resultant(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return 0;
  const int m = a.degree();
  const int n = b.degree();
  if (m == 0 && n == 0) return 1;
  if (m == 0) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), a.leading().get_mpz_t(), static_cast<unsigned long>(n));
    return r;
  }
  if (n == 0) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.leading().get_mpz_t(), static_cast<unsigned long>(m));
    return r;
  }
  const auto size = static_cast<std::size_t>(m + n);
  std::vector<std::vector<mpz_class>> s(size, std::vector<mpz_class>(size));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k <= m; ++k) s[i][i + (m - k)] = a.coeff(static_cast<std::size_t>(k));
  }
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k <= n; ++k) s[n + i][i + (n - k)] = b.coeff(static_cast<std::size_t>(k));
  }
  return bareiss_determinant(std::move(s));
}

mpz_class discriminant(const IntPoly& a) {
  const int d = a.degree();
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "algebra.discriminant", "degree < 1");
  mpz_class r = resultant(a, a.derivative());
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), r.get_mpz_t(), a.leading().get_mpz_t());
  if ((d * (d - 1) / 2) % 2 == 1) q = -q;
  return q;
}

IntPoly interpolate(const std::vector<mpz_class>& xs, const std::vector<mpz_class>& ys) {
  const std::size_t n = xs.size();
  std::vector<mpq_class> dd(ys.begin(), ys.end());
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = n - 1; i >= level; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / mpq_class(xs[i] - xs[i - level]);
    }
  }
  std::vector<mpq_class> poly{dd[n - 1]};
  for (std::size_t k = n - 1; k-- > 0;) {
    // poly := poly * (x - xs[k]) + dd[k]
    std::vector<mpq_class> next(poly.size() + 1);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] += poly[i];
      next[i] -= poly[i] * mpq_class(xs[k]);
    }
    next[0] += dd[k];
    poly = std::move(next);
  }
  std::vector<mpz_class> out(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) {
    poly[i].canonicalize();
    if (poly[i].get_den() != 1) {
      throw Error(ErrorKind::Internal, "algebra.interpolate", "non-integral interpolant");
    }
    out[i] = poly[i].get_num();
  }
  return IntPoly(std::move(out));
}

namespace {

template <class Shifted>
IntPoly resultant_in_x(const IntPoly& f, std::size_t degree, Shifted shifted) {
  std::vector<mpz_class> xs(degree + 1);
  std::vector<mpz_class> ys(degree + 1);
  for (std::size_t k = 0; k <= degree; ++k) {
    xs[k] = static_cast<unsigned long>(k);
    ys[k] = resultant(f, shifted(xs[k]));
  }
  return interpolate(xs, ys);
}

}  // namespace

IntPoly annihilator_sum(const IntPoly& f, const IntPoly& g) {
  if (f.degree() < 1 || g.degree() < 1) {
    throw Error(ErrorKind::InvalidArgument, "algebra.annihilator_sum", "degree < 1");
  }
  const auto deg = static_cast<std::size_t>(f.degree() * g.degree());
  const IntPoly minus_y{0, -1};
  return resultant_in_x(f, deg, [&](const mpz_class& x0) {
    // g(x0 - y) by Horner in y.
    IntPoly shift = IntPoly::constant(x0) + minus_y;
    IntPoly acc;
    const auto& gc = g.coefficients();
    for (auto it = gc.rbegin(); it != gc.rend(); ++it) acc = acc * shift + IntPoly::constant(*it);
    return acc;
  });
}

IntPoly annihilator_product(const IntPoly& f, const IntPoly& g) {
  if (f.degree() < 1 || g.degree() < 1) {
    throw Error(ErrorKind::InvalidArgument, "algebra.annihilator_product", "degree < 1");
  }
  const auto deg = static_cast<std::size_t>(f.degree() * g.degree());
  const std::size_t n = static_cast<std::size_t>(g.degree());
  return resultant_in_x(f, deg, [&](const mpz_class& x0) {
    // y^n g(x0 / y) = sum g_i x0^i y^(n-i)
    std::vector<mpz_class> c(n + 1);
    mpz_class power = 1;
    for (std::size_t i = 0; i <= n; ++i) {
      c[n - i] = g.coeff(i) * power;
      power *= x0;
    }
    return IntPoly(std::move(c));
  });
}

IntPoly annihilator_reciprocal(const IntPoly& f) { return f.reversed(); }

IntPoly annihilator_scale(const IntPoly& f, const mpz_class& c) {
  if (c == 0) throw Error(ErrorKind::InvalidArgument, "algebra.annihilator_scale", "zero scale");
  const auto d = static_cast<std::size_t>(f.degree());
  std::vector<mpz_class> out(d + 1);
  mpz_class power = 1;
  for (std::size_t k = 0; k <= d; ++k) {
    out[d - k] = f.coeff(d - k) * power;
    power *= c;
  }
  return IntPoly(std::move(out));
}

}  // namespace prodcert
