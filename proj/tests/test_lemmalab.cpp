#include "doctest.h"
#include "json.hpp"
#include "prodcert/error.hpp"
#include "prodcert/lemmalab.hpp"

#include <fstream>
#include <random>

using namespace prodcert;

namespace {

std::string fixture(const std::string& rel) { return std::string(PRODCERT_FIXTURES) + "/" + rel; }

nlohmann::json read_json(const std::string& rel) {
  std::ifstream in(fixture(rel));
  return nlohmann::json::parse(in);
}

std::vector<LemmaCase> suite() { return std::get<std::vector<LemmaCase>>(load_spec(fixture("lemmas/suite.json")).body); }

LemmaCase one(const std::string& body) {
  const SpecDocument d = parse_spec(R"J({"schema":1,"kind":"lemma","body":{"cases":[)J" + body + "]}}");
  return std::get<std::vector<LemmaCase>>(d.body).front();
}

ErrorKind error_of(const LemmaCase& c) {
  try {
    verify_lemma(c, 128);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

bool near(const RealBall& b, double value, double tol) {
  return std::fabs(b.mid().to_double() - value) <= tol + b.rad().to_double();
}

}  // namespace

TEST_CASE("the lemma suite verifies against the oracle") {
  const nlohmann::json oracle = read_json("lemma_oracle.json");
  std::set<LemmaId> seen;
  for (const LemmaCase& c : suite()) {
    const LemmaReport r = verify_lemma(c, 128);
    CHECK_MESSAGE(r.verdict == Verdict::verified, c.name << " " << r.lhs.to_string(12) << " vs " << r.rhs.to_string(12));
    seen.insert(c.lemma);
    if (!oracle.contains(c.name)) continue;
    const auto& o = oracle.at(c.name);
    const double tol = o.contains("tol") ? std::stod(o.at("tol").get<std::string>()) : 1e-20;
    CHECK_MESSAGE(near(r.lhs, std::stod(o.at("lhs").get<std::string>()), tol), c.name << " lhs " << r.lhs.to_string(20));
    CHECK_MESSAGE(near(r.rhs, std::stod(o.at("rhs").get<std::string>()), tol), c.name << " rhs " << r.rhs.to_string(20));
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("worked instances") {
  const auto cases = suite();
  auto find = [&](const std::string& name) {
    for (const auto& c : cases) {
      if (c.name == name) return c;
    }
    FAIL("missing case " << name);
    return LemmaCase{};
  };
  const LemmaReport series = verify_lemma(find("series_upper_2n2"), 128);
  CHECK(series.lhs.lower().to_double() <= 0.8225);
  CHECK(series.lhs.upper().to_double() >= 0.8224);
  CHECK(series.rhs.to_double() == doctest::Approx(2.1213203).epsilon(1e-7));

  const LemmaReport product = verify_lemma(find("size_of_product_halves"), 128);
  CHECK(product.lhs.to_double() == doctest::Approx(1.3842310).epsilon(1e-6));
  CHECK(product.rhs.to_double() == doctest::Approx(2.3842310).epsilon(1e-6));

  const LemmaReport jump = verify_lemma(find("jump_powers"), 128);
  CHECK(jump.verdict == Verdict::verified);
  CHECK(jump.scale == "log2");
  CHECK(jump.index == 49);
  // N = 1 is the equality 4 = (1 + 1) 2
  CHECK(jump.witness == "48 jumps, first at N=2");

  const LemmaReport huge = verify_lemma(find("prod_huge_factorial"), 128);
  // at N = 1 the root bound is the equality 2 = 1 + 1
  CHECK(huge.index == 2);
  CHECK(huge.lhs.contains(mpq_class(18)));
}

TEST_CASE("preconditions") {
  CHECK(error_of(one(R"J({"lemma":"series_upper","a":"n^2","epsilon":"1","majorant":{"kind":"zeta","c":"1","s":"2"}})J")) ==
        ErrorKind::PreconditionFailed);
  CHECK(error_of(one(R"J({"lemma":"series_upper","a":"10-n","epsilon":"1","prefix":5})J")) == ErrorKind::PreconditionFailed);
  CHECK(error_of(one(R"J({"lemma":"series_fast","a":"n^3","epsilon":"1/2","prefix":5})J")) == ErrorKind::PreconditionFailed);
  CHECK(error_of(one(R"J({"lemma":"series_general","a":"2*n^2","epsilon":"1/2","N":1,"prefix":5,
                         "majorant":{"kind":"zeta","c":"1","s":"2"}})J")) == ErrorKind::GuardFailed);
  CHECK(error_of(one(R"J({"lemma":"prod_huge","a":"2^n","delta":"1","prefix":5})J")) == ErrorKind::PreconditionFailed);
  CHECK(error_of(one(R"J({"lemma":"prod_huge","a":"2^n","Dn":"n-1","prefix":5})J")) == ErrorKind::PreconditionFailed);
  CHECK(error_of(one(R"J({"lemma":"corollary_fast","a":"2^(2^n)","N":4,"k":3})J")) == ErrorKind::PreconditionFailed);
  CHECK(error_of(one(R"J({"lemma":"size_of_product","a":"1/n","prefix":5,"majorant":{"kind":"geometric","c":"1","r":"1/2"}})J")) ==
        ErrorKind::MajorantUnverified);
}

TEST_CASE("the corollary follows from the fast tail bound") {
  int both = 0;
  for (long t = 3; t <= 5; ++t) {
    const LemmaCase fast = one(R"J({"lemma":"series_fast","a":"2^(2^n)","epsilon":"1/2","N":)J" + std::to_string(t) +
                               R"J(,"prefix":9,"majorant":{"kind":"geometric","c":"1","r":"1/2","start":4}})J");
    const LemmaReport f = verify_lemma(fast, 128);
    for (long k = t; k <= 8; ++k) {
      const LemmaCase cor = one(R"J({"lemma":"corollary_fast","a":"2^(2^n)","epsilon":"1/2","N":)J" + std::to_string(t) +
                                R"J(,"k":)J" + std::to_string(k) + "}");
      const LemmaReport c = verify_lemma(cor, 128);
      if (f.verdict == Verdict::verified) {
        CHECK(c.verdict == Verdict::verified);
        CHECK(less_equal(c.lhs, f.lhs) != Certainty::refuted);
        ++both;
      }
    }
  }
  CHECK(both > 0);
}

TEST_CASE("random precondition-valid cases are never counterexamples") {
  std::mt19937 rng(20261014);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (int i = 0; i < 40; ++i) {
    std::string body;
    switch (i % 4) {
      case 0: {
        const int k = pick(2, 5), s = pick(2, 3), j = pick(0, 5);
        body = R"J({"lemma":"series_upper","a":")J" + std::to_string(k) + "*n^" + std::to_string(s) + "+" +
               std::to_string(j) + R"J(","epsilon":")J" + std::to_string(s - 1) + R"J(","N":)J" +
               std::to_string(pick(1, 6)) + R"J(,"prefix":40,"majorant":{"kind":"zeta","c":"1","s":")J" +
               std::to_string(s) + R"J("}})J";
        break;
      }
      case 1: {
        const int p = pick(1, 3) * (pick(0, 1) ? 1 : -1), q = pick(2, 5);
        body = R"J({"lemma":"size_of_product","a":")J" + std::to_string(p) + "/" + std::to_string(q) + "^n" +
               R"J(","prefix":40,"majorant":{"kind":"geometric","c":")J" + std::to_string(std::abs(p) + 1) + R"J(","r":"1/)J" +
               std::to_string(q) + R"J("}})J";
        break;
      }
      case 2:
        body = R"J({"lemma":"jump","a":")J" + std::to_string(pick(2, 9)) + R"J(^n","prefix":30})J";
        break;
      default:
        body = R"J({"lemma":"corollary_fast","a":")J" + std::to_string(pick(2, 3)) + R"J(^(2^n)","epsilon":"1/2","N":)J" +
               std::to_string(pick(3, 5)) + R"J(,"k":8})J";
    }
    const LemmaReport r = verify_lemma(one(body), 128);
    CHECK_MESSAGE(r.verdict != Verdict::counterexample_candidate, body);
    CHECK_MESSAGE(r.verdict != Verdict::failed, body);
  }
}

TEST_CASE("Z_N on the certified array spec") {
  const SpecDocument d = load_spec(fixture("specs/array_certified_family.json"));
  const Diagnostic z = diagnostic_series(std::get<ArraySpec>(d.body), 0, 8, 128);
  const auto oracle = read_json("z_oracle.json").at("Z_N");
  REQUIRE(z.values.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    REQUIRE(z.log2_values[i]);
    CHECK_MESSAGE(near(*z.log2_values[i], std::stod(oracle.at(i).get<std::string>()), 1e-6), "N=" << i + 1);
    CHECK(z.values[i].certainly_nonnegative());
  }
  // The frozen pre-build oracle shows Z_N growing, so the minimum stays at Z_1.
  CHECK(decreased_by(z, 1000) == Certainty::refuted);
}

TEST_CASE("the lower-bound quantity on a certified sequence") {
  const SpecDocument d = load_spec(fixture("specs/certified_family.json"));
  const Diagnostic q = diagnostic_series(std::get<SequenceSpec>(d.body), 0, 8, 128);
  const auto oracle = read_json("z_oracle.json").at("lower_bound_1");
  for (std::size_t i = 0; i < 8; ++i) {
    REQUIRE(q.log2_values[i]);
    CHECK_MESSAGE(near(*q.log2_values[i], std::stod(oracle.at(i).get<std::string>()), 1e-6), "N=" << i + 1);
  }
  // floor observed in the oracle run: log2 Q_1 = -4.5857...
  CHECK(less(RealBall::from_rational(mpq_class(1, 32), 128), q.running_min.back()) == Certainty::certain);
}

TEST_CASE("finite specs have vanishing diagnostics") {
  const SpecDocument d = parse_spec(R"J({"schema":1,"kind":"product","body":{"alpha":{"list":["4","16","256","65536","4294967296"]}}})J");
  const Diagnostic q = diagnostic_series(std::get<SequenceSpec>(d.body), 1, 7, 128);
  for (long N = 1; N <= 7; ++N) {
    const RealBall& v = q.values[static_cast<std::size_t>(N - 1)];
    if (N >= 5) {
      CHECK(v.is_exact());
      CHECK(v.mid().is_zero());
      CHECK_FALSE(q.log2_values[static_cast<std::size_t>(N - 1)]);
    } else {
      CHECK(v.certainly_positive());
    }
  }
}

TEST_CASE("diagnostic guards") {
  const SpecDocument d = parse_spec(R"J({"schema":1,"kind":"product_of_series","body":{"alpha":"n+m",
      "tail_majorant":{"kind":"zeta","c":"1","s":"2"}}})J");
  try {
    diagnostic_series(std::get<ArraySpec>(d.body), 1, 3, 128);
    FAIL("expected GuardFailed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GuardFailed);
  }
}
