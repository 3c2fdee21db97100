#include "doctest.h"
#include "json.hpp"
#include "prodcert/error.hpp"
#include "prodcert/evaluator.hpp"
#include "prodcert/observables.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

using namespace prodcert;

namespace {

SpecDocument doc(const std::string& kind, const std::string& body) {
  return parse_spec(R"J({"schema":1,"kind":")J" + kind + R"J(","body":)J" + body + "}");
}
SequenceSpec seq(const std::string& body) { return std::get<SequenceSpec>(doc("product", body).body); }
ArraySpec arr(const std::string& body) { return std::get<ArraySpec>(doc("product_of_series", body).body); }

bool contains(const ComplexBall& b, const mpq_class& re, const mpq_class& im = 0) {
  return b.re().contains(re) && b.im().contains(im);
}

std::string fixture(const std::string& rel) { return std::string(PRODCERT_FIXTURES) + "/" + rel; }

std::vector<std::pair<std::string, SpecDocument>> corpus() {
  std::vector<std::pair<std::string, SpecDocument>> out;
  for (const auto& e : std::filesystem::directory_iterator(fixture("specs"))) {
    out.emplace_back(e.path().stem().string(), load_spec(e.path().string()));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
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
  mpz_class ten;
  mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
  if (exp10 < 0) q /= ten;
  else q *= ten;
  q.canonicalize();
  return q;
}

ComplexBall partial(const SpecDocument& d, long N, Precision p) {
  if (const auto* s = std::get_if<SequenceSpec>(&d.body)) return partial_product(*s, N, p);
  return partial_product_2d(std::get<ArraySpec>(d.body), N, p);
}

Enclosure enclosure_at(const SpecDocument& d, long N, Precision p) {
  if (const auto* s = std::get_if<SequenceSpec>(&d.body)) return enclose(*s, N, p);
  return enclose(std::get<ArraySpec>(d.body), N, p);
}

}  // namespace

TEST_CASE("partial products on the closed forms") {
  CHECK(contains(partial_product(seq(R"J({"alpha":{"list":["2"]}})J"), 1, 128), mpq_class(3, 2)));
  const ComplexBall x3 = partial_product(seq(R"J({"alpha":"2^(2^n)"})J"), 3, 128);
  CHECK(contains(x3, mpq_class(5, 4) * mpq_class(17, 16) * mpq_class(257, 256)));
  CHECK(x3.radius().to_double() < 1e-35);
  CHECK(mpq_class(5, 4) * mpq_class(17, 16) * mpq_class(257, 256) == decimal("1.33331298828125"));
  CHECK(contains(partial_product(seq(R"J({"alpha":"2^(2^n)"})J"), 0, 128), 1));

  const ArraySpec a = arr(R"J({"alpha":"2^(2^(n+m))"})J");
  CHECK(contains(partial_product_2d(a, 1, 128), mpq_class(17, 16)));
  CHECK(contains(partial_product_2d(a, 2, 128), (1 + mpq_class(1, 16) + mpq_class(1, 256)) * (1 + mpq_class(1, 256))));
  CHECK(contains(partial_product_2d(a, 0, 128), 1));
}

TEST_CASE("partial products match the oracle") {
  std::ifstream in(fixture("eval_oracle.json"));
  const nlohmann::json oracle = nlohmann::json::parse(in);
  int matched = 0;
  for (const auto& [name, d] : corpus()) {
    if (!oracle.contains(name)) continue;
    const auto& rows = oracle.at(name);
    for (long N = 1; N <= 8; ++N) {
      const ComplexBall x = partial(d, N, 256);
      const auto& row = rows.at(static_cast<std::size_t>(N - 1));
      const ComplexBall widened(x.re().add_error(Float::pow2(-140)), x.im().add_error(Float::pow2(-140)));
      CHECK_MESSAGE(contains(widened, decimal(row[0].get<std::string>()), decimal(row[1].get<std::string>())),
                    name << " N=" << N << " " << x.to_string(30));
      CHECK(x.radius().to_double() < 1e-60);
    }
    ++matched;
  }
  CHECK(matched == 22);
}

TEST_CASE("tail bounds") {
  // 2^(-2^n) <= 2^49 (2^-16)^n from n = 4
  const SequenceSpec g = seq(R"J({"alpha":"2^(2^n)","tail_majorant":{"kind":"geometric","c":"562949953421312","r":"1/65536","start":4}})J");
  const Float S = tail_sum(g, 3, 128);
  CHECK(S.to_double() <= std::ldexp(1.0, -14));
  CHECK(S.to_double() >= std::ldexp(1.0, -16));
  const ComplexBall x3 = partial_product(g, 3, 128);
  const Float T = tail_bound_thm1(g, 3, x3, 128);
  CHECK(T.to_double() <= 1.3334 * std::exp(S.to_double()) * S.to_double() * (1 + 1e-12));

  const SequenceSpec p = seq(R"J({"alpha":"2*n^2","tail_majorant":{"kind":"power","epsilon":"1"}})J");
  const Float P = tail_sum(p, 0, 128);
  CHECK(P.to_double() == doctest::Approx(3 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(P.to_double() > M_PI * M_PI / 12);

  const SequenceSpec f = seq(R"J({"alpha":{"list":["2","3","5"]},"tail_majorant":{"kind":"explicit","bounds":["1/2","1/2","1/4"]}})J");
  CHECK(tail_sum(f, 3, 128).is_zero());
  CHECK(tail_sum(f, 1, 128).to_double() == doctest::Approx(3.0 / 4).epsilon(1e-12));

  const SequenceSpec z = seq(R"J({"alpha":"n^3+1","tail_majorant":{"kind":"zeta","c":"1","s":"3"}})J");
  // sum_{n>=6} 1/n^3 <= 6^-3 + 6^-2/2
  CHECK(tail_sum(z, 5, 128).to_double() == doctest::Approx(1.0 / 216 + 1.0 / 72).epsilon(1e-12));
}

TEST_CASE("evaluate reaches 4/3 within seven terms") {
  const SequenceSpec s = seq(R"J({"alpha":"2^(2^n)","tail_majorant":{"kind":"power","epsilon":"1"}})J");
  EvalPolicy policy;
  policy.target_radius = mpq_class(1, mpz_class("1000000000000000000000000000000"));
  const auto t0 = std::chrono::steady_clock::now();
  const Enclosure e = evaluate(s, policy);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(contains(e.value, mpq_class(4, 3)));
  CHECK(e.value.radius().to_double() <= 1e-30);
  CHECK(e.terms_used <= 7);
  CHECK_FALSE(e.budget_exhausted);
  CHECK(e.provenance == "power");
  CHECK(seconds < 1.0);
}

TEST_CASE("evaluate on 10^(n!)") {
  const SequenceSpec s = seq(R"J({"alpha":"10^(n!)","tail_majorant":{"kind":"geometric","c":"2","r":"1/10"}})J");
  EvalPolicy policy;
  policy.target_radius = mpq_class(1, mpz_class("100000000000000000000"));
  const Enclosure e = evaluate(s, policy);
  CHECK(e.value.radius().to_double() <= 1e-20);
  const ComplexBall x25 = partial_product(s, 25, 256);
  CHECK(e.value.re().contains(x25.re()));
  CHECK(std::fabs(e.value.re().to_double() - x25.re().to_double()) <= 1e-20);
}

TEST_CASE("finite products are exact") {
  const Enclosure e = evaluate(seq(R"J({"alpha":{"list":["2","3","5"]}})J"), EvalPolicy{});
  REQUIRE(e.exact);
  CHECK(*e.exact == mpq_class(12, 5));
  CHECK(e.tail_bound.is_zero());
  CHECK(e.provenance == "finite");
  CHECK(contains(e.value, mpq_class(12, 5)));
}

TEST_CASE("evaluator errors and budgets") {
  auto kind = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Internal;
  };
  CHECK(kind([] { partial_product(seq(R"J({"alpha":"1"})J"), 2, 128); }) == ErrorKind::TermMagnitude);
  CHECK(kind([] { partial_product_2d(arr(R"J({"alpha":"-1"})J"), 1, 128); }) == ErrorKind::FactorNearZero);
  CHECK(kind([] { tail_sum(seq(R"J({"alpha":"n+1","tail_majorant":{"kind":"geometric","c":"1","r":"1/2"}})J"), 3, 128); }) ==
        ErrorKind::MajorantUnverified);
  CHECK(kind([] { tail_sum(seq(R"J({"alpha":"n+1"})J"), 3, 128); }) == ErrorKind::MajorantUnverified);

  EvalPolicy tight;
  tight.target_radius = mpq_class(1, mpz_class("1000000000000000000000000000000"));
  tight.max_terms = 40;
  const Enclosure slow = evaluate(seq(R"J({"alpha":"2*n^2","tail_majorant":{"kind":"zeta","c":"1","s":"2"}})J"), tight);
  CHECK(slow.budget_exhausted);
  CHECK(slow.terms_used <= 40);
  CHECK(slow.value.re().contains(RealBall::from_rational(mpq_class(1), 64)) == false);
}

TEST_CASE("array evaluation") {
  const ArraySpec a = arr(R"J({"alpha":"2^(2^(n+m))","tail_majorant":{"kind":"geometric","c":"1","r":"1/2"}})J");
  EvalPolicy policy;
  policy.target_radius = mpq_class(1, mpz_class("1000000000000000000000000"));
  const Enclosure e = evaluate(a, policy);
  CHECK(e.value.radius().to_double() <= 1e-24);
  REQUIRE(e.C0);
  CHECK(*e.C0 == 1);
  CHECK(e.value.re().contains(partial_product_2d(a, e.terms_used + 6, 256).re()));
}

TEST_CASE("tail soundness over the corpus") {
  int specs = 0;
  int complex_modes = 0;
  for (const auto& [name, d] : corpus()) {
    for (long N : {1L, 3L, 5L}) {
      const Enclosure e = enclosure_at(d, N, 256);
      const ComplexBall later = partial(d, N + 10, 256);
      CHECK_MESSAGE(e.value.contains(later), name << " N=" << N);
    }
    if (const auto* a = std::get_if<ArraySpec>(&d.body)) {
      if (a->sign_mode == SignMode::I || a->sign_mode == SignMode::II || a->sign_mode == SignMode::III) ++complex_modes;
    }
    ++specs;
  }
  CHECK(specs >= 20);
  CHECK(complex_modes >= 3);
}

TEST_CASE("xi values and the pivot identity") {
  const ArraySpec one_term = arr(R"J({"alpha":"16"})J");
  const XiValue xi = xi_value(one_term, 1, 1, 128);
  CHECK(contains(xi.xi, 16));
  CHECK(xi.above_half == Certainty::certain);

  const ArraySpec imag = arr(R"J({"alpha":{"poly":["4^(2^(n+m))","0","1"],"hint":["0","2^(2^(n+m))"]},"sign_mode":"I"})J");
  for (long N = 1; N <= 5; ++N) {
    for (long m = 1; m <= N; ++m) {
      const XiValue v = xi_value(imag, N, m, 64);
      CHECK(v.xi.re().certainly_nonnegative());
      CHECK(v.above_half == Certainty::certain);
      const auto [lhs, rhs] = pivot_sides(v.xi);
      CHECK(lhs.overlaps(rhs));
    }
  }
  // xi_{2,1} = i 2^8 (1 - i/16) has real part 16
  CHECK(xi_value(imag, 2, 1, 128).xi.re().contains(mpq_class(16)));

  for (const auto& [name, d] : corpus()) {
    const auto* a = std::get_if<ArraySpec>(&d.body);
    if (!a) continue;
    for (long N = 1; N <= 4; ++N) {
      for (long m = 1; m <= N; ++m) {
        const auto [lhs, rhs] = pivot_sides(xi_value(*a, N, m, 256).xi);
        CHECK_MESSAGE(lhs.overlaps(rhs), name);
      }
    }
  }
}

TEST_CASE("monotone partial products") {
  for (const auto& [name, d] : corpus()) {
    if (const auto* s = std::get_if<SequenceSpec>(&d.body)) {
      if (s->length) continue;
      const Monotonicity m = monotonicity(*s, 12, s->e, 128);
      CHECK_MESSAGE(m.verdict == Verdict::verified, name << ": " << m.witness);
    } else {
      const auto& a = std::get<ArraySpec>(d.body);
      if ((a.sign_mode != SignMode::main && a.sign_mode != SignMode::I) || a.e != 1) continue;
      const Monotonicity m = monotonicity(a, 10, a.e, 128);
      CHECK_MESSAGE(m.verdict == Verdict::verified, name << ": " << m.witness);
    }
  }
  // alpha = -3 gives factors 2/3 < 1, so nondecreasing fails
  const Monotonicity bad = monotonicity(seq(R"J({"alpha":"-(3^n)"})J"), 5, 1, 128);
  CHECK(bad.verdict == Verdict::failed);
}

TEST_CASE("evaluation is deterministic") {
  const SequenceSpec s = seq(R"J({"alpha":"2^(n*2^n)","tail_majorant":{"kind":"power","epsilon":"1"}})J");
  EvalPolicy policy;
  policy.target_radius = mpq_class(1, mpz_class("1000000000000000000000000000000"));
  const Enclosure a = evaluate(s, policy);
  const Enclosure b = evaluate(s, policy);
  CHECK(a.value.to_string(40) == b.value.to_string(40));
  CHECK(a.tail_bound.to_string(20) == b.tail_bound.to_string(20));
}
