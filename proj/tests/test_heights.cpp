#include "doctest.h"
#include "json.hpp"
#include "prodcert/error.hpp"
#include "prodcert/heights.hpp"

#include <fstream>

using namespace prodcert;

namespace {

IntPoly P(std::initializer_list<long> c) { return IntPoly(c); }

AlgebraicNumber near(const IntPoly& f, double re, double im = 0) {
  return select_nearest(f, ComplexRational{mpq_class(re), mpq_class(im)});
}

mpq_class decimal(const std::string& s) {
  const auto e = s.find_first_of("eE");
  std::string mant = s.substr(0, e);
  long exp10 = e == std::string::npos ? 0 : std::stol(s.substr(e + 1));
  const auto dot = mant.find('.');
  if (dot != std::string::npos) {
    exp10 -= static_cast<long>(mant.size() - dot - 1);
    mant.erase(dot, 1);
  }
  mpq_class q(mpz_class(mant, 10));
  mpz_class ten = 1;
  mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 < 0) q /= ten;
  else q *= ten;
  q.canonicalize();
  return q;
}

// The ball must contain the oracle value up to the oracle's own rounding.
bool matches(const RealBall& b, const std::string& oracle) {
  return b.add_error(Float::pow2(-100)).contains(decimal(oracle)) && b.rad().to_double() < 1e-30;
}

struct CorpusEntry {
  AlgebraicNumber alpha;
  std::string house;
  std::string mahler;
  bool integer;
};

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = [] {
    std::ifstream in(std::string(PRODCERT_FIXTURES) + "/corpus.json");
    const auto doc = nlohmann::json::parse(in);
    std::vector<CorpusEntry> out;
    for (const auto& e : doc.at("numbers")) {
      std::vector<mpz_class> c;
      for (const auto& v : e.at("poly")) c.emplace_back(v.get<long>());
      const ComplexRational hint{decimal(e.at("hint")[0]), decimal(e.at("hint")[1])};
      out.push_back({select_nearest(IntPoly(c), hint), e.at("house"), e.at("mahler"), e.at("integer")});
    }
    return out;
  }();
  return entries;
}

}  // namespace

TEST_CASE("house") {
  CHECK(house(AlgebraicNumber::from_integer(5), 128).contains(mpq_class(5)));
  CHECK(matches(house(near(P({-2, 0, 1}), 1.4), 128), "1.41421356237309504880168872420969807857"));
  // Only phi, not its conjugate -0.618.
  CHECK(matches(house(near(P({-1, -1, 1}), -0.6), 128), "1.61803398874989484820458683436563811772"));
}

TEST_CASE("mahler measure") {
  CHECK(mahler(AlgebraicNumber::from_integer(3), 128).contains(mpq_class(3)));
  const RealBall m_i = mahler(near(P({1, 0, 1}), 0, 1), 128);
  CHECK(m_i.contains(mpq_class(1)));
  CHECK(matches(m_i, "1"));
  CHECK(matches(mahler(near(P({-1, -1, 1}), 1.6), 128), "1.61803398874989484820458683436563811772"));
}

TEST_CASE("weil height") {
  CHECK(weil_height(AlgebraicNumber::from_integer(7), 128).contains(mpq_class(7)));
  const auto r2 = near(P({-2, 0, 1}), 1.4);
  CHECK(mahler(r2, 128).contains(mpq_class(2)));
  CHECK(matches(weil_height(r2, 128), "1.41421356237309504880168872420969807857"));
  const auto half = AlgebraicNumber::from_rational(mpq_class(1, 2));
  CHECK(mahler(half, 128).contains(mpq_class(2)));
  CHECK(weil_height(half, 128).contains(mpq_class(2)));
  CHECK(weil_height(AlgebraicNumber::from_rational(mpq_class(-7, 3)), 64).contains(mpq_class(7)));
  const auto rep = height_report(r2, 128);
  CHECK(rep.degree == 2);
  CHECK(rep.house.overlaps(rep.weil));
}

TEST_CASE("liouville gap") {
  const auto r2 = near(P({-2, 0, 1}), 1.4);
  const auto g = liouville_gap(r2, AlgebraicNumber::from_integer(1), 128);
  CHECK(g.holds == Verdict::verified);
  CHECK(g.bound.contains(mpq_class(1, 8)));
  CHECK(matches(g.distance, "0.41421356237309504880168872420969807857"));

  try {
    (void)liouville_gap(r2, near(P({-2, 0, 1}), -1.4), 128);
    FAIL("expected ConjugatePair");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConjugatePair);
  }
  CHECK_THROWS_AS((void)liouville_gap(r2, r2, 128), Error);

  const auto h = liouville_gap(AlgebraicNumber::from_rational(mpq_class(1, 2)), AlgebraicNumber(), 128);
  CHECK(h.holds == Verdict::verified);
  CHECK(h.bound.contains(mpq_class(1, 4)));
  CHECK(h.distance.contains(mpq_class(1, 2)));
}

TEST_CASE("inequality suite examples") {
  auto verdict_of = [](const std::vector<SuiteCheck>& checks, const std::string& id) {
    for (const auto& c : checks) {
      if (c.id == id) return c.verdict;
    }
    return Verdict::skipped;
  };

  const auto five = inequality_suite({AlgebraicNumber::from_integer(5)}, 128);
  REQUIRE(five.size() == 3);
  for (const auto& c : five) CHECK(c.verdict == Verdict::verified);
  CHECK(five[0].rhs.contains(mpq_class(5)));
  CHECK(five[2].lhs.contains(mpq_class(5)));

  const auto pair = inequality_suite({near(P({-2, 0, 1}), 1.4), near(P({-3, 0, 1}), 1.7)}, 128);
  CHECK(verdict_of(pair, "sum_bound") == Verdict::verified);
  // H(sqrt 6) = H(sqrt 2) H(sqrt 3): a tie cannot be separated by balls.
  CHECK(verdict_of(pair, "product_bound") == Verdict::inconclusive);
  for (const auto& c : pair) {
    if (c.id == "sum_bound") CHECK(matches(c.rhs, "9.79795897113271239278913629882356556787"));
  }

  const auto i = inequality_suite({near(P({1, 0, 1}), 0, 1)}, 128);
  for (const auto& c : i) CHECK(c.verdict == Verdict::verified);
  const auto rep = height_report(near(P({1, 0, 1}), 0, 1), 128);
  CHECK(rep.house.contains(mpq_class(1)));
  CHECK(rep.mahler.contains(mpq_class(1)));
  CHECK(rep.weil.contains(mpq_class(1)));
}

TEST_CASE("suite skips combinations over the degree cap") {
  const auto a = near(P({-2, 0, 0, 0, 0, 1}), 1.1);
  const auto b = near(P({-3, 0, 0, 0, 0, 0, 1}), 1.2);
  SuiteOptions opts;
  opts.triples = false;
  const auto checks = inequality_suite({a, b}, 128, opts);
  int skipped = 0;
  for (const auto& c : checks) {
    if (c.verdict == Verdict::skipped) {
      ++skipped;
      CHECK(c.note == "DegreeCapExceeded");
    }
  }
  CHECK(skipped == 2);
}

TEST_CASE("corpus values match high-precision oracle") {
  REQUIRE(corpus().size() >= 50);
  for (const auto& e : corpus()) {
    INFO(e.alpha.to_string());
    CHECK(e.alpha.is_integer() == e.integer);
    CHECK(matches(house(e.alpha, 256), e.house));
    CHECK(matches(mahler(e.alpha, 256), e.mahler));
  }
}

TEST_CASE("property: height inequalities over the corpus") {
  for (const auto& e : corpus()) {
    INFO(e.alpha.to_string());
    const auto r = height_report(e.alpha, 128);
    CHECK(pow_uint(r.weil, static_cast<unsigned long>(r.degree)).overlaps(r.mahler));
    if (e.alpha.is_integer()) {
      CHECK(less_equal(RealBall::from_si(1, 128), r.mahler.add_error(r.mahler.rad())) != Certainty::refuted);
      CHECK(compare_le(r.weil, r.house.add_error(r.house.rad())) != Verdict::failed);
      CHECK(compare_le(r.house, r.mahler.add_error(r.mahler.rad())) != Verdict::failed);
    }
    if (!e.alpha.is_zero()) {
      CHECK(weil_height(arith(ArithOp::reciprocal, e.alpha), 128).overlaps(r.weil));
    }
  }
}

TEST_CASE("property: equality cases of the house bounds") {
  for (int d = 1; d <= 8; ++d) {
    std::vector<mpz_class> c(static_cast<std::size_t>(d) + 1, 0);
    c.front() = -2;
    c.back() = 1;
    const auto a = near(IntPoly(c), 1.0);
    const auto r = height_report(a, 128);
    INFO(d);
    CHECK(r.weil.overlaps(r.house));
  }
  for (long n : {-9L, -1L, 2L, 17L}) {
    const auto r = height_report(AlgebraicNumber::from_integer(n), 128);
    CHECK(r.house.overlaps(r.mahler));
  }
}

TEST_CASE("property: liouville gap never violated on corpus pairs") {
  const auto& all = corpus();
  int verified = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (all[i].alpha.minpoly() == all[j].alpha.minpoly()) continue;
      const auto g = liouville_gap(all[i].alpha, all[j].alpha, 128);
      CHECK(g.holds != Verdict::violated);
      if (g.holds == Verdict::verified) ++verified;
    }
  }
  CHECK(verified > 0);
}

TEST_CASE("suite on a corpus slice reports no violations") {
  std::vector<AlgebraicNumber> slice;
  for (std::size_t i = 0; i < 6; ++i) slice.push_back(corpus()[i].alpha);
  for (const auto& c : inequality_suite(slice, 128)) {
    INFO(c.id << " " << c.inputs);
    CHECK(c.verdict != Verdict::violated);
    CHECK(c.verdict != Verdict::failed);
  }
}
