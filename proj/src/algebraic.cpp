#include "prodcert/algebraic.hpp"

#include <functional>
#include <utility>

#include "prodcert/error.hpp"
#include "prodcert/factor.hpp"
#include "prodcert/roots.hpp"

namespace prodcert {

namespace {

enum class Place { inside, outside, straddle };

struct Span {
  mpq_class lo;
  mpq_class hi;
};

Span span(const RealBall& x) {
  const mpq_class m = x.mid().to_rational();
  const mpq_class r = x.rad().to_rational();
  return {m - r, m + r};
}

Place classify(const ComplexBall& box, const RootRegion& region) {
  const Span re = span(box.re());
  const Span im = span(box.im());
  const mpq_class& h = region.half_width;
  const mpq_class re_lo = region.center.re - h, re_hi = region.center.re + h;
  const mpq_class im_lo = region.center.im - h, im_hi = region.center.im + h;
  if (re.hi < re_lo || re.lo > re_hi || im.hi < im_lo || im.lo > im_hi) return Place::outside;
  if (re.lo >= re_lo && re.hi <= re_hi && im.lo >= im_lo && im.hi <= im_hi) return Place::inside;
  return Place::straddle;
}

// A small square around boxes[i] that certainly excludes every other box.
std::optional<RootRegion> tighten(const std::vector<ComplexBall>& boxes, std::size_t i) {
  const ComplexBall& b = boxes[i];
  RootRegion region;
  region.center.re = b.re().mid().to_rational();
  region.center.im = b.im().mid().to_rational();
  mpq_class r = std::max(b.re().rad().to_rational(), b.im().rad().to_rational());
  mpq_class scale = 1 + abs(region.center.re) + abs(region.center.im);
  mpq_class floor_width = scale / mpq_class(mpz_class(1) << 60);
  region.half_width = 4 * r + floor_width;
  for (std::size_t j = 0; j < boxes.size(); ++j) {
    if (j != i && classify(boxes[j], region) != Place::outside) return std::nullopt;
  }
  if (classify(b, region) != Place::inside) return std::nullopt;
  return region;
}

std::optional<std::size_t> locate_at(const std::vector<ComplexBall>& boxes, const RootRegion& region) {
  std::optional<std::size_t> hit;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (classify(boxes[i], region) == Place::outside) continue;
    if (hit) return std::nullopt;
    hit = i;
  }
  return hit;
}

ComplexBall locate(const IntPoly& poly, const RootRegion& region, Precision prec) {
  for (Precision w = prec; w <= precision_cap(); w *= 2) {
    auto boxes = isolate_roots(poly, w);
    if (auto hit = locate_at(boxes, region)) {
      if (w == prec) return boxes[*hit];
      // Rebuild at the requested precision when it is now unambiguous.
      auto again = isolate_roots(poly, prec);
      if (auto h2 = locate_at(again, region)) return again[*h2];
      return boxes[*hit];
    }
  }
  throw Error(ErrorKind::PrecisionBudgetExceeded, "algebra.approximate",
              "selector does not single out one root within the precision cap", poly.to_string());
}


}  // namespace

AlgebraicNumber::AlgebraicNumber() : AlgebraicNumber(IntPoly{0, 1}, RootRegion{{0, 0}, 1}) {}

AlgebraicNumber::AlgebraicNumber(IntPoly minpoly, RootRegion region)
    : minpoly_(std::move(minpoly)), region_(std::move(region)) {}

AlgebraicNumber from_isolated(IntPoly minpoly, RootRegion region) {
  return AlgebraicNumber(std::move(minpoly), std::move(region));
}

AlgebraicNumber AlgebraicNumber::from_rational(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  IntPoly p(std::vector<mpz_class>{-c.get_num(), c.get_den()});
  return AlgebraicNumber(std::move(p), RootRegion{{c, 0}, 1});
}

mpq_class AlgebraicNumber::rational_value() const {
  if (!is_rational()) throw Error(ErrorKind::InvalidArgument, "algebra.rational_value", "not rational");
  mpq_class q(-minpoly_.coeff(0), minpoly_.coeff(1));
  q.canonicalize();
  return q;
}

std::string AlgebraicNumber::to_string() const {
  if (is_rational()) return rational_value().get_str();
  ComplexBall z = approximate(*this, 64);
  return "root(" + minpoly_.to_string() + ";" + z.re().mid().to_string(12) + "," +
         z.im().mid().to_string(12) + ")";
}

AlgebraicNumber make_algebraic(const IntPoly& minpoly, const RootRegion& selector) {
  if (minpoly.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "algebra.make_algebraic", "zero polynomial");
  if (minpoly.degree() < 1) {
    throw Error(ErrorKind::InvalidArgument, "algebra.make_algebraic", "constant polynomial",
                minpoly.to_string());
  }
  if (selector.half_width <= 0) {
    throw Error(ErrorKind::InvalidArgument, "algebra.make_algebraic", "half-width must be positive");
  }
  IntPoly p = minpoly.primitive_part();
  if (!is_irreducible(p)) {
    throw Error(ErrorKind::Reducible, "algebra.make_algebraic", "polynomial factors over Q", p.to_string());
  }
  for (Precision w = 64; w <= precision_cap(); w *= 2) {
    auto boxes = isolate_roots(p, w);
    bool straddle = false;
    std::vector<std::size_t> inside;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const Place place = classify(boxes[i], selector);
      if (place == Place::straddle) straddle = true;
      if (place == Place::inside) inside.push_back(i);
    }
    if (straddle) continue;
    if (inside.size() != 1) {
      throw Error(ErrorKind::AmbiguousSelector, "algebra.make_algebraic",
                  "region holds " + std::to_string(inside.size()) + " roots", p.to_string());
    }
    if (p.degree() == 1) return AlgebraicNumber::from_rational(mpq_class(-p.coeff(0), p.coeff(1)));
    auto tight = tighten(boxes, inside.front());
    return from_isolated(p, tight ? *tight : selector);
  }
  throw Error(ErrorKind::AmbiguousSelector, "algebra.make_algebraic",
              "region boundary meets a root at every precision", p.to_string());
}

AlgebraicNumber select_nearest(const IntPoly& minpoly, const ComplexRational& hint) {
  if (minpoly.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "algebra.select_nearest", "zero polynomial");
  IntPoly p = minpoly.primitive_part();
  if (p.degree() < 1) {
    throw Error(ErrorKind::InvalidArgument, "algebra.select_nearest", "constant polynomial", p.to_string());
  }
  if (!is_irreducible(p)) {
    throw Error(ErrorKind::Reducible, "algebra.select_nearest", "polynomial factors over Q", p.to_string());
  }
  if (p.degree() == 1) return AlgebraicNumber::from_rational(mpq_class(-p.coeff(0), p.coeff(1)));
  for (Precision w = 64; w <= precision_cap(); w *= 2) {
    auto boxes = isolate_roots(p, w);
    const ComplexBall h = ComplexBall::from_rationals(hint.re, hint.im, w);
    std::vector<RealBall> dist;
    for (const auto& b : boxes) dist.push_back((b - h).abs());
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < boxes.size() && !best; ++i) {
      bool wins = true;
      for (std::size_t j = 0; j < boxes.size() && wins; ++j) {
        if (j != i && less(dist[i], dist[j]) != Certainty::certain) wins = false;
      }
      if (wins) best = i;
    }
    if (!best) continue;
    if (auto tight = tighten(boxes, *best)) return from_isolated(p, *tight);
  }
  throw Error(ErrorKind::AmbiguousSelector, "algebra.select_nearest",
              "hint is equidistant from several roots", p.to_string());
}

ComplexBall approximate(const AlgebraicNumber& alpha, Precision prec) {
  if (prec < 16) throw Error(ErrorKind::InvalidArgument, "algebra.approximate", "precision below 16 bits");
  if (alpha.is_rational()) return ComplexBall(RealBall::from_rational(alpha.rational_value(), prec));
  return locate(alpha.minpoly(), alpha.selector(), prec);
}

std::vector<ComplexBall> conjugate_enclosures(const AlgebraicNumber& alpha, Precision prec) {
  if (alpha.is_rational()) return {approximate(alpha, prec)};
  return isolate_roots(alpha.minpoly(), prec);
}

bool same_number(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (!(a.minpoly() == b.minpoly())) return false;
  if (a.is_rational()) return true;
  for (Precision w = 64; w <= precision_cap(); w *= 2) {
    auto boxes = isolate_roots(a.minpoly(), w);
    auto ia = locate_at(boxes, a.selector());
    auto ib = locate_at(boxes, b.selector());
    if (ia && ib) return *ia == *ib;
  }
  throw Error(ErrorKind::PrecisionBudgetExceeded, "algebra.same_number", "selectors unresolved");
}

namespace {

// Picks the factor and root compatible with `value` (an enclosure of the
// exact result at each precision).
AlgebraicNumber pick_root(const std::vector<IntPoly>& factors,
                          const std::function<ComplexBall(Precision)>& value, const char* where) {
  for (Precision w = 128; w <= precision_cap(); w *= 2) {
    const ComplexBall s = value(w);
    std::vector<const IntPoly*> live;
    for (const auto& f : factors) {
      if (f(s).contains_zero()) live.push_back(&f);
    }
    if (live.size() != 1) continue;
    const IntPoly& f = *live.front();
    if (f.degree() == 1) return AlgebraicNumber::from_rational(mpq_class(-f.coeff(0), f.coeff(1)));
    auto boxes = isolate_roots(f, w);
    std::optional<std::size_t> hit;
    bool ambiguous = false;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      if (!boxes[i].overlaps(s)) continue;
      if (hit) ambiguous = true;
      hit = i;
    }
    if (!hit || ambiguous) continue;
    if (auto tight = tighten(boxes, *hit)) return from_isolated(f, *tight);
  }
  throw Error(ErrorKind::FactorSelectionAmbiguous, where,
              "no unique compatible factor within the precision cap");
}

void check_cap(const AlgebraicNumber& a, const AlgebraicNumber& b, int cap, const char* where) {
  if (a.degree() * b.degree() > cap) {
    throw Error(ErrorKind::DegreeCapExceeded, where,
                "degree " + std::to_string(a.degree() * b.degree()) + " exceeds cap " +
                    std::to_string(cap));
  }
}

}  // namespace

AlgebraicNumber negate(const AlgebraicNumber& a) {
  if (a.is_rational()) return AlgebraicNumber::from_rational(-a.rational_value());
  RootRegion r = a.selector();
  r.center.re = -r.center.re;
  r.center.im = -r.center.im;
  return from_isolated(a.minpoly().reflected().primitive_part(), r);
}

AlgebraicNumber scale(const AlgebraicNumber& a, const mpz_class& c) {
  if (c == 0) return AlgebraicNumber();
  if (a.is_rational()) return AlgebraicNumber::from_rational(a.rational_value() * c);
  RootRegion r = a.selector();
  r.center.re *= c;
  r.center.im *= c;
  r.half_width *= abs(c);
  return from_isolated(annihilator_scale(a.minpoly(), c).primitive_part(), r);
}

AlgebraicNumber arith(ArithOp op, const AlgebraicNumber& a, const std::optional<AlgebraicNumber>& b,
                      int degree_cap) {
  switch (op) {
    case ArithOp::reciprocal: {
      if (a.is_zero()) throw Error(ErrorKind::ZeroReciprocal, "algebra.arith", "reciprocal of 0");
      if (a.is_rational()) return AlgebraicNumber::from_rational(1 / a.rational_value());
      const IntPoly f = annihilator_reciprocal(a.minpoly()).primitive_part();
      return pick_root({f}, [&](Precision w) {
        return ComplexBall(RealBall::from_si(1, w)) / approximate(a, w);
      }, "algebra.arith.reciprocal");
    }
    case ArithOp::sum: {
      if (!b) throw Error(ErrorKind::InvalidArgument, "algebra.arith", "sum needs two operands");
      if (a.is_rational() && b->is_rational()) {
        return AlgebraicNumber::from_rational(a.rational_value() + b->rational_value());
      }
      if (a.is_zero()) return *b;
      if (b->is_zero()) return a;
      check_cap(a, *b, degree_cap, "algebra.arith.sum");
      const auto factors = irreducible_factors(annihilator_sum(a.minpoly(), b->minpoly()));
      return pick_root(factors, [&](Precision w) { return approximate(a, w) + approximate(*b, w); },
                       "algebra.arith.sum");
    }
    case ArithOp::product: {
      if (!b) throw Error(ErrorKind::InvalidArgument, "algebra.arith", "product needs two operands");
      if (a.is_zero() || b->is_zero()) return AlgebraicNumber();
      if (a.is_rational() && b->is_rational()) {
        return AlgebraicNumber::from_rational(a.rational_value() * b->rational_value());
      }
      check_cap(a, *b, degree_cap, "algebra.arith.product");
      const auto factors = irreducible_factors(annihilator_product(a.minpoly(), b->minpoly()));
      return pick_root(factors, [&](Precision w) { return approximate(a, w) * approximate(*b, w); },
                       "algebra.arith.product");
    }
  }
  throw Error(ErrorKind::Internal, "algebra.arith", "unknown operation");
}

namespace {

// theta + c beta with c chosen so that all theta_i + c beta_j are distinct,
// which makes it a primitive element of Q(theta, beta).
AlgebraicNumber combine(const AlgebraicNumber& theta, const AlgebraicNumber& beta, int cap) {
  check_cap(theta, beta, cap, "algebra.degree_over");
  for (Precision w = 128; w <= precision_cap(); w *= 2) {
    const auto ts = conjugate_enclosures(theta, w);
    const auto bs = conjugate_enclosures(beta, w);
    std::vector<ComplexBall> quotients;
    bool finite = true;
    for (std::size_t i = 0; i < ts.size() && finite; ++i) {
      for (std::size_t k = 0; k < ts.size() && finite; ++k) {
        if (i == k) continue;
        for (std::size_t j = 0; j < bs.size() && finite; ++j) {
          for (std::size_t l = 0; l < bs.size(); ++l) {
            if (j == l) continue;
            ComplexBall q = (ts[k] - ts[i]) / (bs[j] - bs[l]);
            if (!q.is_finite()) {
              finite = false;
              break;
            }
            quotients.push_back(std::move(q));
          }
        }
      }
    }
    if (!finite) continue;
    for (long step = 1; step <= 40; ++step) {
      const long c = (step % 2 == 1) ? (step + 1) / 2 : -(step / 2);
      const ComplexBall point(RealBall::from_si(c, w));
      bool clear = true;
      for (const auto& q : quotients) {
        if (q.overlaps(point)) {
          clear = false;
          break;
        }
      }
      if (clear) return arith(ArithOp::sum, theta, scale(beta, c), cap);
    }
  }
  throw Error(ErrorKind::PrecisionBudgetExceeded, "algebra.degree_over", "no separating multiplier found");
}

}  // namespace

std::optional<AlgebraicNumber> primitive_element(const std::vector<AlgebraicNumber>& tower, int degree_cap) {
  std::optional<AlgebraicNumber> theta;
  for (const auto& beta : tower) {
    if (beta.is_rational()) continue;
    if (!theta) {
      if (beta.degree() > degree_cap) {
        throw Error(ErrorKind::DegreeCapExceeded, "algebra.degree_over", "generator degree exceeds cap");
      }
      theta = beta;
      continue;
    }
    theta = combine(*theta, beta, degree_cap);
  }
  return theta;
}

int degree_over(const AlgebraicNumber& alpha, const std::vector<AlgebraicNumber>& tower, int degree_cap) {
  if (alpha.is_rational()) return 1;
  auto theta = primitive_element(tower, degree_cap);
  if (!theta) return alpha.degree();
  const AlgebraicNumber gamma = combine(*theta, alpha, degree_cap);
  return gamma.degree() / theta->degree();
}

}  // namespace prodcert
