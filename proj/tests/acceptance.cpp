// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "prodcert/error.hpp"
#include "prodcert/evaluator.hpp"
#include "prodcert/heights.hpp"
#include "prodcert/lemmalab.hpp"
#include "prodcert/report.hpp"

using namespace prodcert;

namespace {

// Pinned tolerances and sizes.
constexpr Precision kHeightPrecision = 256;
constexpr double kHeightRadius = 1e-20;
constexpr double kHeightSeconds = 30.0;
constexpr std::size_t kMinCorpus = 50;
constexpr int kMaxCorpusDegree = 8;
constexpr std::size_t kMinPairs = 100;
constexpr int kPairDegreeCap = 3;
constexpr double kEvalSeconds = 1.0;
constexpr long kEvalMaxTerms = 7;
constexpr std::size_t kMinTailSpecs = 20;
constexpr long kTailLookahead = 10;
constexpr long kTheorem1Prefix = 20;
constexpr long kTheorem2Prefix = 10;
constexpr long kDiagnosticPrefix = 8;
constexpr long kMonotonePrefix = 30;
constexpr long kReportPrefix = 8;
constexpr double kLemmaTolerance = 1e-4;

std::string fixture(const std::string& rel) { return std::string(PRODCERT_FIXTURES) + "/" + rel; }

nlohmann::json read_json(const std::string& rel) {
  std::ifstream in(fixture(rel));
  return nlohmann::json::parse(in);
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

std::vector<AlgebraicNumber> corpus() {
  std::vector<AlgebraicNumber> out;
  const nlohmann::json doc = read_json("corpus.json");
  for (const auto& e : doc.at("numbers")) {
    std::vector<mpz_class> c;
    for (const auto& v : e.at("poly")) c.emplace_back(v.get<long>());
    const ComplexRational hint{decimal(e.at("hint")[0]), decimal(e.at("hint")[1])};
    out.push_back(select_nearest(IntPoly(c), hint));
  }
  return out;
}

std::vector<std::pair<std::string, SpecDocument>> specs() {
  std::vector<std::pair<std::string, SpecDocument>> out;
  for (const auto& e : std::filesystem::directory_iterator(fixture("specs"))) {
    out.emplace_back(e.path().stem().string(), load_spec(e.path().string()));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

SpecDocument spec(const std::string& name) { return load_spec(fixture("specs/" + name + ".json")); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome height_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto numbers = corpus();
  std::size_t ok = 0;
  double worst = 0;
  for (const auto& a : numbers) {
    if (a.degree() > kMaxCorpusDegree) return {false, a.to_string() + " exceeds the degree limit"};
    const HeightReport r = height_report(a, kHeightPrecision);
    const RealBall hd = pow_uint(r.weil, static_cast<unsigned long>(r.degree));
    worst = std::max({worst, hd.rad().to_double(), r.mahler.rad().to_double()});
    if (hd.overlaps(r.mahler)) ++ok;
  }
  const double t = seconds_since(t0);
  const bool pass = numbers.size() >= kMinCorpus && ok == numbers.size() && worst <= kHeightRadius && t <= kHeightSeconds;
  return {pass, std::to_string(ok) + "/" + std::to_string(numbers.size()) + " intersect, max radius " + fmt(worst) +
                    ", " + fmt(t) + " s"};
}

Outcome house_chain() {
  std::size_t integers = 0, failed = 0;
  for (const auto& a : corpus()) {
    if (!a.is_integer()) continue;
    ++integers;
    const HeightReport r = height_report(a, kHeightPrecision);
    if (compare_le(r.weil, r.house) == Verdict::failed || compare_le(r.house, r.mahler) == Verdict::failed) ++failed;
  }
  int left = 0, right = 0;
  for (int d = 1; d <= kMaxCorpusDegree; ++d) {
    std::vector<mpz_class> c(static_cast<std::size_t>(d) + 1, 0);
    c.front() = -2;
    c.back() = 1;
    const HeightReport r = height_report(select_nearest(IntPoly(c), {mpq_class(1), mpq_class(0)}), kHeightPrecision);
    const RealBall root = exp2(RealBall::from_rational(mpq_class(1, d), kHeightPrecision));
    if (r.weil.overlaps(r.house) && r.house.overlaps(root)) ++left;
  }
  for (long n : {-9L, -1L, 2L, 17L}) {
    const HeightReport r = height_report(AlgebraicNumber::from_integer(n), kHeightPrecision);
    if (r.house.overlaps(r.mahler)) ++right;
  }
  return {integers > 0 && failed == 0 && left == kMaxCorpusDegree && right == 4,
          std::to_string(integers) + " integers, " + std::to_string(failed) + " failed; equality at x^d-2 for " +
              std::to_string(left) + " degrees, at " + std::to_string(right) + " rational integers"};
}

Outcome arithmetic_bounds() {
  const auto numbers = corpus();
  std::size_t reciprocal = 0, nonzero = 0;
  std::vector<AlgebraicNumber> small;
  for (const auto& a : numbers) {
    if (a.is_zero()) continue;
    ++nonzero;
    if (weil_height(arith(ArithOp::reciprocal, a), kHeightPrecision).overlaps(weil_height(a, kHeightPrecision))) {
      ++reciprocal;
    }
    if (a.degree() <= kPairDegreeCap) small.push_back(a);
  }
  SuiteOptions options;
  options.triples = false;
  std::size_t sums = 0, products = 0, bad = 0;
  for (const SuiteCheck& c : inequality_suite(small, kHeightPrecision, options)) {
    if (c.verdict == Verdict::failed || c.verdict == Verdict::violated) ++bad;
    if (c.verdict != Verdict::verified) continue;
    if (c.id == "sum_bound") ++sums;
    if (c.id == "product_bound") ++products;
  }
  return {reciprocal == nonzero && sums >= kMinPairs && products >= kMinPairs && bad == 0,
          "reciprocal " + std::to_string(reciprocal) + "/" + std::to_string(nonzero) + "; verified sum " +
              std::to_string(sums) + ", product " + std::to_string(products) + " over " + std::to_string(small.size()) +
              " numbers; " + std::to_string(bad) + " failed"};
}

Outcome liouville() {
  const auto all = corpus();
  std::size_t pairs = 0, verified = 0, violated = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (all[i].minpoly() == all[j].minpoly()) continue;
      ++pairs;
      const Verdict v = liouville_gap(all[i], all[j], kHeightPrecision).holds;
      if (v == Verdict::verified) ++verified;
      if (v == Verdict::violated) ++violated;
    }
  }
  const AlgebraicNumber sqrt2 = select_nearest(IntPoly({-2, 0, 1}), {mpq_class(141, 100), mpq_class(0)});
  const GapVerdict g = liouville_gap(sqrt2, AlgebraicNumber::from_integer(1), kHeightPrecision);
  const bool instance = g.holds == Verdict::verified && g.bound.contains(mpq_class(1, 8)) &&
                        std::fabs(g.distance.to_double() - 0.41421356) < 1e-8;
  return {violated == 0 && instance,
          std::to_string(verified) + "/" + std::to_string(pairs) + " verified, " + std::to_string(violated) +
              " violated; (sqrt2, 1): " + g.distance.to_string(6) + " >= " + g.bound.to_string(6)};
}

Outcome closed_form() {
  const SequenceSpec s = std::get<SequenceSpec>(spec("double_exponential").body);
  EvalPolicy policy;
  policy.target_radius = mpq_class(1, mpz_class("1000000000000000000000000000000"));
  const auto t0 = std::chrono::steady_clock::now();
  const Enclosure e = evaluate(s, policy);
  const double t = seconds_since(t0);
  const double radius = e.value.radius().to_double();
  const bool pass = e.value.re().contains(mpq_class(4, 3)) && e.value.im().contains(mpq_class(0)) &&
                    radius <= 1e-30 && e.terms_used <= kEvalMaxTerms && t <= kEvalSeconds && !e.budget_exhausted;
  return {pass, "radius " + fmt(radius) + ", " + std::to_string(e.terms_used) + " terms, " + fmt(t) + " s"};
}

Outcome tail_soundness() {
  std::size_t count = 0, failures = 0, complex_modes = 0;
  std::string first;
  for (const auto& [name, d] : specs()) {
    ++count;
    for (long N : {1L, 3L, 5L}) {
      bool ok = false;
      if (const auto* s = std::get_if<SequenceSpec>(&d.body)) {
        ok = enclose(*s, N, 256).value.contains(partial_product(*s, N + kTailLookahead, 256));
      } else {
        const auto& a = std::get<ArraySpec>(d.body);
        ok = enclose(a, N, 256).value.contains(partial_product_2d(a, N + kTailLookahead, 256));
      }
      if (!ok) {
        ++failures;
        if (first.empty()) first = " first " + name + " N=" + std::to_string(N);
      }
    }
    if (const auto* a = std::get_if<ArraySpec>(&d.body)) {
      if (a->sign_mode == SignMode::I || a->sign_mode == SignMode::II || a->sign_mode == SignMode::III) ++complex_modes;
    }
  }
  return {failures == 0 && count >= kMinTailSpecs && complex_modes >= 3,
          std::to_string(count) + " specs (" + std::to_string(complex_modes) + " complex modes I-III), " +
              std::to_string(failures) + " failures" + first};
}

std::string verdicts(const Certificate& c) {
  std::string out;
  for (const auto& h : c.checks) out += (out.empty() ? "" : " ") + h.id + "=" + std::string(to_string(h.verdict));
  return out;
}

Outcome discrimination() {
  SequenceSpec good = std::get<SequenceSpec>(spec("certified_family").body);
  good.D = 1;
  SequenceSpec flat = good;
  flat.alpha = std::get<SequenceSpec>(spec("double_exponential").body).alpha;
  const Certificate g = check_theorem1(good, kTheorem1Prefix);
  const Certificate f = check_theorem1(flat, kTheorem1Prefix);
  bool only_h5 = !f.certified && f.checks.size() == g.checks.size();
  for (std::size_t i = 0; only_h5 && i < f.checks.size(); ++i) {
    only_h5 = f.checks[i].id == "h5" ? f.checks[i].verdict == Verdict::failed : f.checks[i].verdict == g.checks[i].verdict;
  }
  // H_n = 4 means log2 H_n = 2 at every index
  bool four = f.growth.size() == static_cast<std::size_t>(kTheorem1Prefix);
  for (const RealBall& h : f.growth) four = four && h.contains(mpq_class(2));
  return {g.certified && only_h5 && four,
          "2^(n2^n): " + g.conclusion() + "; 2^(2^n): " + f.conclusion() + " [" + verdicts(f) + "], H_n = 4 on " +
              std::to_string(f.growth.size()) + " indices"};
}

Outcome theorem2() {
  const Certificate c = check_theorem2(std::get<ArraySpec>(spec("array_certified_family").body), kTheorem2Prefix);
  std::string failing;
  if (const auto* g5 = c.find("g5"); g5 && g5->verdict == Verdict::failed) failing = "; g5: " + g5->witness.substr(0, 90);
  return {c.certified, c.conclusion() + " [" + verdicts(c) + "]" + failing};
}

Outcome lemma_suite() {
  const auto cases = std::get<std::vector<LemmaCase>>(load_spec(fixture("lemmas/suite.json")).body);
  std::set<LemmaId> ids;
  std::size_t verified = 0, counterexamples = 0;
  bool series = false, product = false;
  for (const LemmaCase& c : cases) {
    const LemmaReport r = verify_lemma(c, kDefaultPrecision);
    ids.insert(c.lemma);
    if (r.verdict == Verdict::verified) ++verified;
    if (r.verdict == Verdict::counterexample_candidate) ++counterexamples;
    if (c.name == "series_upper_2n2") {
      series = std::fabs(r.lhs.to_double() - 0.8225) < kLemmaTolerance && std::fabs(r.rhs.to_double() - 2.1213) < kLemmaTolerance;
    }
    if (c.name == "size_of_product_halves") {
      product = std::fabs(r.lhs.to_double() - 1.3842) < kLemmaTolerance && std::fabs(r.rhs.to_double() - 2.3842) < kLemmaTolerance;
    }
  }
  return {verified == cases.size() && counterexamples == 0 && ids.size() == 7 && series && product,
          std::to_string(verified) + "/" + std::to_string(cases.size()) + " verified, " + std::to_string(ids.size()) +
              " lemma ids, " + std::to_string(counterexamples) + " counterexample candidates"};
}

Outcome z_probe() {
  const auto oracle = read_json("z_oracle.json");
  const mpq_class threshold = parse_rational(oracle.at("Z_N_threshold").get<std::string>());
  const Diagnostic z = diagnostic_series(std::get<ArraySpec>(spec("array_certified_family").body), 0, kDiagnosticPrefix,
                                         kDefaultPrecision);
  const Certainty c = decreased_by(z, threshold);
  std::string logs;
  for (const auto& v : z.log2_values) logs += (logs.empty() ? "" : " ") + (v ? fmt(v->to_double()) : std::string("-inf"));
  return {c == Certainty::certain, "required factor " + threshold.get_str() + ", decrease " +
                                       (c == Certainty::certain ? "certain" : c == Certainty::refuted ? "refuted" : "unknown") +
                                       "; log2 Z_1..Z_8 = " + logs};
}

Outcome monotone() {
  std::size_t up = 0, down = 0, failures = 0;
  std::string first;
  for (const auto& [name, d] : specs()) {
    Monotonicity m;
    if (const auto* s = std::get_if<SequenceSpec>(&d.body)) {
      if (s->length) continue;
      m = monotonicity(*s, kMonotonePrefix, s->e, kDefaultPrecision);
      (s->e == 1 ? up : down) += 1;
    } else {
      const auto& a = std::get<ArraySpec>(d.body);
      if ((a.sign_mode != SignMode::main && a.sign_mode != SignMode::I) || a.e != 1) continue;
      m = monotonicity(a, kMonotonePrefix, a.e, kDefaultPrecision);
      ++up;
    }
    if (m.verdict != Verdict::verified) {
      ++failures;
      if (first.empty()) first = "; first " + name + ": " + m.witness;
    }
  }
  return {failures == 0 && up > 0 && down > 0, std::to_string(up) + " nondecreasing, " + std::to_string(down) +
                                                   " nonincreasing specs, " + std::to_string(failures) + " failures" + first};
}

std::string full_run() {
  RunOptions options;
  options.prefix = kReportPrefix;
  std::string out;
  std::vector<std::string> paths;
  for (const auto& e : std::filesystem::directory_iterator(fixture("specs"))) paths.push_back(e.path().string());
  std::sort(paths.begin(), paths.end());
  paths.push_back(fixture("lemmas/suite.json"));
  paths.push_back(fixture("heights/small.json"));
  for (const std::string& p : paths) {
    out += render(run_command("report", load_spec(p), options).report, ReportFormat::structured);
  }
  return out;
}

Outcome determinism() {
  const std::string a = full_run();
  const std::string b = full_run();
  return {a == b, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"height identity", height_identity},
      {"house chain", house_chain},
      {"reciprocal and arithmetic bounds", arithmetic_bounds},
      {"liouville gap", liouville},
      {"closed form 4/3", closed_form},
      {"tail soundness", tail_soundness},
      {"theorem 1 discrimination", discrimination},
      {"theorem 2 prefix check", theorem2},
      {"lemma suite", lemma_suite},
      {"Z_N decrease probe", z_probe},
      {"monotonicity", monotone},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << "C" << i + 1 << (i + 1 < 10 ? "  " : " ") << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first
              << ": " << o.detail << " (" << fmt(seconds_since(t0)) << " s)" << std::endl;
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
