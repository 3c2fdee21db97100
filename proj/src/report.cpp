#include "prodcert/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "prodcert/criteria.hpp"
#include "prodcert/error.hpp"
#include "prodcert/evaluator.hpp"
#include "prodcert/heights.hpp"
#include "prodcert/lemmalab.hpp"
#include "prodcert/observables.hpp"

namespace prodcert {

namespace {

using ojson = nlohmann::ordered_json;

constexpr int kDigits = 15;
constexpr long kMonotoneCap = 30;
constexpr long kDiagnosticCap = 8;

std::string ball(const RealBall& x) { return short_string(x, kDigits); }

ojson check_record(const std::string& id, Verdict v, const std::string& lhs = "-", const std::string& rhs = "-",
                   const std::string& note = {}) {
  ojson c;
  c["id"] = id;
  c["verdict"] = std::string(to_string(v));
  c["lhs"] = lhs;
  c["rhs"] = rhs;
  c["note"] = note;
  return c;
}

ojson section(const std::string& title) {
  ojson s;
  s["title"] = title;
  s["checks"] = ojson::array();
  s["data"] = ojson::object();
  return s;
}

ojson error_json(const Error& e) {
  ojson j;
  j["kind"] = std::string(to_string(e.kind()));
  j["where"] = e.where();
  j["message"] = e.message();
  j["context"] = e.context();
  return j;
}

bool acceptable(Verdict v) { return v == Verdict::verified || v == Verdict::asserted || v == Verdict::skipped; }

ojson certificate_section(const Certificate& c) {
  ojson s = section("theorem" + std::to_string(c.theorem) + " D=" + std::to_string(c.D) + " N=" +
                    std::to_string(c.prefix_N));
  s["conclusion"] = c.conclusion();
  for (const auto& h : c.checks) s["checks"].push_back(check_record(h.id, h.verdict, "-", "-", h.witness));
  ojson d = ojson::array(), D = ojson::array(), source = ojson::array();
  for (std::size_t i = 0; i < c.tower.D.size(); ++i) {
    d.push_back(c.tower.d[i]);
    D.push_back(c.tower.D[i].get_str());
    source.push_back(std::string(to_string(c.tower.source[i])));
  }
  ojson tower;
  tower["d"] = d;
  tower["D"] = D;
  tower["source"] = source;
  s["data"]["tower"] = tower;
  ojson growth = ojson::array();
  for (const auto& g : c.growth) growth.push_back(magnitude_string(g));
  s["data"]["growth"] = growth;
  return s;
}

template <class Spec>
Certificate certify(const Spec& spec, long N, Precision prec) {
  if constexpr (std::is_same_v<Spec, SequenceSpec>) return check_theorem1(spec, N, prec);
  else return check_theorem2(spec, N, prec);
}

template <class Spec>
void run_check(const Spec& spec, const RunOptions& o, ojson& sections) {
  const long N = o.prefix.value_or(kDefaultCheckPrefix);
  if (o.d_max <= 0) {
    sections.push_back(certificate_section(certify(spec, N, o.precision)));
    return;
  }
  for (int D = 1; D <= o.d_max; ++D) {
    Spec copy = spec;
    copy.D = D;
    sections.push_back(certificate_section(certify(copy, N, o.precision)));
  }
}

int digits_for(const mpq_class& target) {
  const double t = mpq_class(target).get_d();
  const int d = t > 0 ? static_cast<int>(std::ceil(-std::log10(t))) + 5 : 40;
  return std::clamp(d, 20, 80);
}

template <class Spec>
void run_eval(const Spec& spec, const RunOptions& o, ojson& sections) {
  EvalPolicy policy;
  policy.target_radius = o.target_radius;
  policy.precision = o.precision;
  if (o.prefix) policy.max_terms = *o.prefix;
  const Enclosure e = evaluate(spec, policy);
  ojson s = section("enclosure");
  const int digits = digits_for(o.target_radius);
  const RealBall radius(e.value.radius(), Float());
  const RealBall target = RealBall::from_rational(o.target_radius, kDefaultPrecision);
  const Verdict v = e.budget_exhausted ? Verdict::inconclusive : compare_le(radius, target);
  char target_text[32];
  std::snprintf(target_text, sizeof target_text, "%g", o.target_radius.get_d());
  s["checks"].push_back(check_record("radius", v, e.value.radius().to_string(6), target_text,
                                     e.budget_exhausted ? "budget exhausted" : ""));
  auto& d = s["data"];
  d["re"] = e.value.re().to_string(digits);
  d["im"] = e.value.im().to_string(digits);
  d["radius"] = e.value.radius().to_string(6);
  d["tail_bound"] = e.tail_bound.to_string(6);
  d["terms_used"] = e.terms_used;
  d["provenance"] = e.provenance;
  d["precision"] = e.precision;
  d["budget_exhausted"] = e.budget_exhausted;
  if (e.exact) d["exact"] = e.exact->get_str();
  if (e.C0) d["C0"] = e.C0->get_str();
  sections.push_back(s);
}

template <class Spec>
void run_monotonicity(const Spec& spec, const RunOptions& o, ojson& sections) {
  ojson s = section("monotonicity");
  const long N = std::min(o.prefix.value_or(kMonotoneCap), kMonotoneCap);
  bool predicted = true;
  if constexpr (std::is_same_v<Spec, ArraySpec>) {
    predicted = (spec.sign_mode == SignMode::main || spec.sign_mode == SignMode::I) && spec.e == 1;
  }
  if (!predicted) {
    s["checks"].push_back(check_record("monotone", Verdict::skipped, "-", "-", "not predicted for this sign mode and e"));
  } else {
    try {
      const Monotonicity m = monotonicity(spec, N, spec.e, o.precision);
      const std::string dir = spec.e > 0 ? "nondecreasing" : "nonincreasing";
      s["checks"].push_back(check_record("monotone", m.verdict, "-", "-",
                                         dir + " for N<=" + std::to_string(N) + (m.witness.empty() ? "" : "; " + m.witness)));
    } catch (const Error& e) {
      s["checks"].push_back(check_record("monotone", Verdict::skipped, "-", "-", e.what()));
    }
  }
  sections.push_back(s);
}

template <class Spec>
void run_diagnostic(const Spec& spec, const RunOptions& o, ojson& sections) {
  const long N = std::min(o.prefix.value_or(kDiagnosticCap), kDiagnosticCap);
  try {
    const Diagnostic diag = diagnostic_series(spec, 0, N, o.precision);
    ojson s = section(std::string("diagnostic ") + std::string(to_string(diag.kind)));
    ojson logs = ojson::array();
    ojson mins = ojson::array();
    std::optional<RealBall> low;
    bool zero = false;
    for (const auto& l : diag.log2_values) {
      logs.push_back(l ? short_string(*l, 10) : "-inf");
      if (!l) zero = true;
      else low = low ? min(*low, *l) : *l;
      mins.push_back(zero ? "-inf" : short_string(*low, 10));
    }
    s["data"]["log2_values"] = logs;
    s["data"]["log2_running_min"] = mins;
    sections.push_back(s);
  } catch (const Error& e) {
    ojson s = section("diagnostic");
    s["checks"].push_back(check_record("diagnostic", Verdict::skipped, "-", "-", e.what()));
    sections.push_back(s);
  }
}

void run_lemmas(const std::vector<LemmaCase>& cases, const RunOptions& o, ojson& sections) {
  ojson s = section("lemmas");
  for (const auto& c : cases) {
    const LemmaReport r = verify_lemma(c, o.precision);
    std::string note = std::string(to_string(r.lemma)) + " at " + std::to_string(r.index);
    if (r.scale != "value") note += " (" + r.scale + ")";
    if (!r.witness.empty()) note += "; " + r.witness;
    s["checks"].push_back(check_record(r.name, r.verdict, ball(r.lhs), ball(r.rhs), note));
  }
  sections.push_back(s);
}

void run_heights(const HeightsBody& body, const RunOptions& o, ojson& sections) {
  const std::vector<AlgebraicNumber> numbers = body.build();
  ojson table = section("numbers");
  ojson rows = ojson::array();
  for (const auto& a : numbers) {
    const HeightReport h = height_report(a, o.precision);
    rows.push_back({{"minpoly", a.minpoly().to_string()},
                    {"degree", h.degree},
                    {"house", ball(h.house)},
                    {"mahler", ball(h.mahler)},
                    {"weil", ball(h.weil)}});
  }
  table["data"]["numbers"] = rows;
  sections.push_back(table);

  SuiteOptions so;
  so.pairs = body.pairs;
  so.triples = body.triples;
  so.degree_cap = body.degree_cap;
  ojson suite = section("inequalities");
  for (const auto& c : inequality_suite(numbers, o.precision, so)) {
    std::string note = c.inputs;
    if (!c.note.empty()) note += "; " + c.note;
    suite["checks"].push_back(check_record(c.id, c.verdict, ball(c.lhs), ball(c.rhs), note));
  }
  if (body.liouville) {
    for (std::size_t i = 0; i < numbers.size(); ++i) {
      for (std::size_t j = i + 1; j < numbers.size(); ++j) {
        const std::string inputs = "#" + std::to_string(i + 1) + " #" + std::to_string(j + 1);
        try {
          const GapVerdict g = liouville_gap(numbers[i], numbers[j], o.precision);
          suite["checks"].push_back(check_record("liouville", g.holds, ball(g.distance), ball(g.bound), inputs));
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::ConjugatePair) throw;
          suite["checks"].push_back(check_record("liouville", Verdict::skipped, "-", "-", inputs + "; conjugate pair"));
        }
      }
    }
  }
  sections.push_back(suite);
}

// Strings bare, arrays space-separated, objects as key: value groups.
std::string plain(const ojson& v) {
  if (v.is_string()) return v.get<std::string>();
  std::string out;
  if (v.is_array()) {
    for (const auto& x : v) out += (out.empty() ? "" : " ") + plain(x);
    return out;
  }
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) out += (out.empty() ? "" : "; ") + k + ": " + plain(x);
    return out;
  }
  return v.dump();
}

const std::vector<std::string> kCommands = {"check", "eval", "lemmas", "heights", "report"};

[[noreturn]] void wrong_kind(const std::string& command, SpecKind kind) {
  throw Error(ErrorKind::InvalidArgument, "cli.run", "command '" + command + "' does not apply to a " +
                                                         std::string(to_string(kind)) + " spec");
}

template <class Spec>
void run_product(const std::string& command, const Spec& spec, const RunOptions& o, ojson& sections) {
  if (command == "check") return run_check(spec, o, sections);
  if (command == "eval") return run_eval(spec, o, sections);
  if (command == "report") {
    run_check(spec, o, sections);
    run_eval(spec, o, sections);
    run_monotonicity(spec, o, sections);
    run_diagnostic(spec, o, sections);
    return;
  }
  wrong_kind(command, std::is_same_v<Spec, SequenceSpec> ? SpecKind::product : SpecKind::product_of_series);
}

int exit_code_of(const ojson& sections) {
  for (const auto& s : sections) {
    if (s.contains("conclusion") && s["conclusion"] != "certified-conditional") return 1;
    for (const auto& c : s["checks"]) {
      const auto v = verdict_from_string(c["verdict"].get<std::string>());
      if (!v || !acceptable(*v)) return 1;
    }
  }
  return 0;
}

ojson header(const std::string& command, const std::string& name, const std::string& kind) {
  ojson r;
  r["schema"] = kReportSchema;
  r["tool"] = "prodcert";
  r["command"] = command;
  r["spec"] = {{"name", name}, {"kind", kind}};
  return r;
}

}  // namespace

RunResult run_command(const std::string& command, const SpecDocument& doc, const RunOptions& options) {
  RunResult out;
  out.report = header(command, doc.name, std::string(to_string(doc.kind)));
  ojson sections = ojson::array();
  try {
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
      throw Error(ErrorKind::InvalidArgument, "cli.run", "unknown command '" + command + "'");
    }
    std::visit(
        [&](const auto& body) {
          using T = std::decay_t<decltype(body)>;
          if constexpr (std::is_same_v<T, SequenceSpec> || std::is_same_v<T, ArraySpec>) {
            run_product(command, body, options, sections);
          } else if constexpr (std::is_same_v<T, std::vector<LemmaCase>>) {
            if (command != "lemmas" && command != "report") wrong_kind(command, doc.kind);
            run_lemmas(body, options, sections);
          } else {
            if (command != "heights" && command != "report") wrong_kind(command, doc.kind);
            run_heights(body, options, sections);
          }
        },
        doc.body);
    out.exit_code = exit_code_of(sections);
    out.report["sections"] = sections;
  } catch (const Error& e) {
    out.exit_code = 2;
    out.report["error"] = error_json(e);
  }
  out.report["exit_code"] = out.exit_code;
  return out;
}

RunResult error_result(const std::string& command, const std::string& path, const std::exception& e) {
  RunResult out;
  out.exit_code = 2;
  out.report = header(command, path, "unknown");
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    out.report["error"] = error_json(*err);
  } else {
    out.report["error"] = {{"kind", "Internal"}, {"where", "cli"}, {"message", e.what()}, {"context", ""}};
  }
  out.report["exit_code"] = 2;
  return out;
}

std::string render(const ojson& report, ReportFormat format) {
  if (format == ReportFormat::structured) return report.dump(2) + "\n";
  std::ostringstream os;
  os << "# prodcert " << report["command"].get<std::string>() << " " << report["spec"]["name"].get<std::string>()
     << " (" << report["spec"]["kind"].get<std::string>() << ")\n";
  if (report.contains("sections")) {
    for (const auto& s : report["sections"]) {
      os << "SECTION " << s["title"].get<std::string>();
      if (s.contains("conclusion")) os << " " << s["conclusion"].get<std::string>();
      os << "\n";
      for (const auto& [key, value] : s["data"].items()) {
        os << "  " << key << " = " << plain(value) << "\n";
      }
      for (const auto& c : s["checks"]) {
        os << "CHECK " << c["id"].get<std::string>() << " " << c["verdict"].get<std::string>() << " "
           << c["lhs"].get<std::string>() << " " << c["rhs"].get<std::string>();
        const std::string note = c["note"].get<std::string>();
        if (!note.empty()) os << " \"" << note << "\"";
        os << "\n";
      }
    }
  }
  if (report.contains("error")) {
    const auto& e = report["error"];
    os << "ERROR " << e["kind"].get<std::string>() << " in " << e["where"].get<std::string>() << ": "
       << e["message"].get<std::string>();
    if (!e["context"].get<std::string>().empty()) os << " [" << e["context"].get<std::string>() << "]";
    os << "\n";
  }
  os << "EXIT " << report["exit_code"].get<int>() << "\n";
  return os.str();
}

std::optional<Verdict> verdict_from_string(std::string_view s) {
  for (Verdict v : {Verdict::verified, Verdict::asserted, Verdict::failed, Verdict::inconclusive, Verdict::violated,
                    Verdict::counterexample_candidate, Verdict::skipped}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::vector<std::pair<std::string, Verdict>> verdicts_of(const nlohmann::json& report) {
  std::vector<std::pair<std::string, Verdict>> out;
  if (!report.contains("sections")) return out;
  for (const auto& s : report.at("sections")) {
    for (const auto& c : s.at("checks")) {
      const auto v = verdict_from_string(c.at("verdict").get<std::string>());
      if (!v) throw Error(ErrorKind::SchemaError, "cli.verdicts_of", "unknown verdict", c.at("verdict").dump());
      out.emplace_back(s.at("title").get<std::string>() + "/" + c.at("id").get<std::string>(), *v);
    }
  }
  return out;
}

}  // namespace prodcert
