#include "prodcert/heights.hpp"

#include "prodcert/error.hpp"

namespace prodcert {

RealBall house(const AlgebraicNumber& alpha, Precision prec) {
  const auto conj = conjugate_enclosures(alpha, prec);
  RealBall h = conj.front().abs();
  for (std::size_t i = 1; i < conj.size(); ++i) h = max(h, conj[i].abs());
  return h;
}

RealBall mahler(const AlgebraicNumber& alpha, Precision prec) {
  if (alpha.is_rational()) {
    const mpq_class q = alpha.rational_value();
    return RealBall::from_integer(std::max(mpz_class(abs(q.get_num())), mpz_class(q.get_den())), prec);
  }
  const RealBall one = RealBall::from_si(1, prec);
  RealBall m = RealBall::from_integer(abs(alpha.minpoly().leading()), prec);
  for (const auto& z : conjugate_enclosures(alpha, prec)) m = m * max(one, z.abs());
  return m;
}

RealBall weil_height(const AlgebraicNumber& alpha, Precision prec) {
  if (alpha.is_rational()) {
    const mpq_class q = alpha.rational_value();
    const RealBall numeric = RealBall::from_integer(alpha.minpoly().leading(), prec) *
                             max(RealBall::from_si(1, prec), abs(RealBall::from_rational(q, prec)));
    const mpz_class exact = std::max(mpz_class(abs(q.get_num())), mpz_class(q.get_den()));
    if (!numeric.contains(mpq_class(exact))) {
      throw Error(ErrorKind::Internal, "heights.weil_height", "rational cross-check failed", q.get_str());
    }
    return RealBall::from_integer(exact, prec);
  }
  const RealBall m = mahler(alpha, prec);
  return pow(m, RealBall::from_rational(mpq_class(1, alpha.degree()), prec));
}

HeightReport height_report(const AlgebraicNumber& alpha, Precision prec) {
  return HeightReport{house(alpha, prec), mahler(alpha, prec), weil_height(alpha, prec), alpha.degree()};
}

namespace {

GapVerdict gap_at(const AlgebraicNumber& a, const AlgebraicNumber& b, Precision prec) {
  GapVerdict g;
  g.distance = (approximate(a, prec) - approximate(b, prec)).abs();
  const RealBall base = RealBall::from_si(2, prec) * weil_height(a, prec) * weil_height(b, prec);
  const auto e = static_cast<unsigned long>(a.degree() * b.degree());
  g.bound = RealBall::from_si(1, prec) / pow_uint(base, e);
  if (less(g.bound, g.distance) == Certainty::certain) g.holds = Verdict::verified;
  else if (less(g.distance, g.bound) == Certainty::certain) g.holds = Verdict::violated;
  else g.holds = Verdict::inconclusive;
  return g;
}

std::string label(const AlgebraicNumber& a) { return a.to_string(); }

SuiteCheck check_le(std::string id, std::string inputs, const RealBall& lhs, const RealBall& rhs) {
  SuiteCheck c{std::move(id), std::move(inputs), lhs, rhs, compare_le(lhs, rhs), {}};
  // The suite only claims verified or inconclusive on ties and rounding.
  if (c.verdict == Verdict::failed) c.verdict = Verdict::violated;
  return c;
}

}  // namespace

GapVerdict liouville_gap(const AlgebraicNumber& alpha, const AlgebraicNumber& beta, Precision prec) {
  if (alpha.minpoly() == beta.minpoly()) {
    throw Error(ErrorKind::ConjugatePair, "heights.liouville_gap", "inputs share a minimal polynomial",
                alpha.minpoly().to_string());
  }
  GapVerdict g = gap_at(alpha, beta, prec);
  if (g.holds == Verdict::inconclusive) g = gap_at(alpha, beta, 2 * prec);
  return g;
}

std::vector<SuiteCheck> inequality_suite(const std::vector<AlgebraicNumber>& numbers, Precision prec,
                                         const SuiteOptions& options) {
  if (numbers.empty()) throw Error(ErrorKind::InvalidArgument, "heights.inequality_suite", "empty list");
  std::vector<SuiteCheck> out;
  std::vector<RealBall> heights;
  heights.reserve(numbers.size());
  for (const auto& a : numbers) heights.push_back(weil_height(a, prec));

  auto retry = [&](auto&& make) {
    SuiteCheck c = make(prec);
    if (c.verdict == Verdict::inconclusive) c = make(2 * prec);
    return c;
  };

  for (std::size_t i = 0; i < numbers.size(); ++i) {
    const AlgebraicNumber& a = numbers[i];
    const std::string in = label(a);
    if (a.is_integer()) {
      out.push_back(retry([&](Precision p) {
        return check_le("house_lower", in, weil_height(a, p), house(a, p));
      }));
      out.push_back(retry([&](Precision p) {
        return check_le("house_upper", in, house(a, p), mahler(a, p));
      }));
    }
    if (!a.is_zero()) {
      const AlgebraicNumber inv = arith(ArithOp::reciprocal, a);
      const RealBall lhs = weil_height(inv, prec);
      SuiteCheck c{"reciprocal", in, lhs, heights[i], Verdict::verified, {}};
      if (!lhs.overlaps(heights[i])) c.verdict = Verdict::violated;
      out.push_back(std::move(c));
    }
  }

  auto combo = [&](const std::vector<std::size_t>& idx) {
    std::string in;
    std::vector<AlgebraicNumber> parts;
    for (std::size_t k : idx) {
      if (!in.empty()) in += "&";
      in += label(numbers[k]);
      parts.push_back(numbers[k]);
    }
    const auto n = static_cast<long>(idx.size());
    try {
      AlgebraicNumber sum = parts.front();
      AlgebraicNumber prod = parts.front();
      for (std::size_t k = 1; k < parts.size(); ++k) {
        sum = arith(ArithOp::sum, sum, parts[k], options.degree_cap);
        prod = arith(ArithOp::product, prod, parts[k], options.degree_cap);
      }
      out.push_back(retry([&](Precision p) {
        RealBall bound = RealBall::from_si(1L << n, p);
        for (const auto& b : parts) bound = bound * weil_height(b, p);
        return check_le("sum_bound", in, weil_height(sum, p), bound);
      }));
      out.push_back(retry([&](Precision p) {
        RealBall bound = RealBall::from_si(1, p);
        for (const auto& b : parts) bound = bound * weil_height(b, p);
        return check_le("product_bound", in, weil_height(prod, p), bound);
      }));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegreeCapExceeded) throw;
      for (const char* id : {"sum_bound", "product_bound"}) {
        out.push_back(SuiteCheck{id, in, RealBall(prec), RealBall(prec), Verdict::skipped,
                                 std::string(to_string(e.kind()))});
      }
    }
  };

  if (options.pairs) {
    for (std::size_t i = 0; i < numbers.size(); ++i) {
      for (std::size_t j = i + 1; j < numbers.size(); ++j) combo({i, j});
    }
  }
  if (options.triples) {
    for (std::size_t i = 0; i < numbers.size(); ++i) {
      for (std::size_t j = i + 1; j < numbers.size(); ++j) {
        for (std::size_t k = j + 1; k < numbers.size(); ++k) combo({i, j, k});
      }
    }
  }
  return out;
}

}  // namespace prodcert
