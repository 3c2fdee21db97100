#include "prodcert/spec.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "prodcert/error.hpp"
#include "prodcert/factor.hpp"

namespace prodcert {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& message) {
  throw Error(ErrorKind::SchemaError, "cli.load_spec", message, path);
}

// A JSON node plus the field path that reached it.
class Field {
 public:
  Field(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  const json& node() const { return node_; }
  const std::string& path() const { return path_; }

  bool has(const std::string& key) const { return node_.is_object() && node_.contains(key); }

  Field at(const std::string& key) const {
    if (!node_.is_object()) schema(path_, "expected an object");
    if (!node_.contains(key)) schema(path_ + "." + key, "missing field");
    return Field(node_.at(key), path_ + "." + key);
  }

  Field at(std::size_t i) const {
    return Field(node_.at(i), path_ + "[" + std::to_string(i) + "]");
  }

  std::vector<Field> items() const {
    if (!node_.is_array()) schema(path_, "expected an array");
    std::vector<Field> out;
    for (std::size_t i = 0; i < node_.size(); ++i) out.push_back(at(i));
    return out;
  }

  void allow(std::initializer_list<const char*> keys) const {
    if (!node_.is_object()) schema(path_, "expected an object");
    for (const auto& [key, value] : node_.items()) {
      bool known = false;
      for (const char* k : keys) known = known || key == k;
      if (!known) schema(path_ + "." + key, "unknown field");
    }
  }

  std::string str() const {
    if (!node_.is_string()) schema(path_, "expected a string");
    return node_.get<std::string>();
  }

  long integer() const {
    if (!node_.is_number_integer()) schema(path_, "expected an integer");
    return node_.get<long>();
  }

  bool boolean() const {
    if (!node_.is_boolean()) schema(path_, "expected a boolean");
    return node_.get<bool>();
  }

  mpq_class rational() const {
    if (node_.is_number_integer()) return mpq_class(node_.get<long>());
    try {
      return parse_rational(str());
    } catch (const Error&) {
      schema(path_, "expected a rational such as \"1/2\"");
    }
  }

  Expression expression() const {
    std::string text;
    if (node_.is_number_integer()) text = std::to_string(node_.get<long>());
    else text = str();
    try {
      return Expression::parse(text);
    } catch (const Error& e) {
      throw Error(ErrorKind::ExpressionError, "cli.load_spec", e.message(), path_ + ": " + e.context());
    }
  }

  RationalExpr rational_expression() const {
    std::string text;
    if (node_.is_number_integer()) text = std::to_string(node_.get<long>());
    else text = str();
    try {
      return RationalExpr::parse(text);
    } catch (const Error& e) {
      throw Error(ErrorKind::ExpressionError, "cli.load_spec", e.message(), path_ + ": " + e.context());
    }
  }

 private:
  const json& node_;
  std::string path_;
};

AlphaGenerator parse_alpha(const Field& f, bool allow_list) {
  AlphaGenerator g;
  if (f.node().is_string() || f.node().is_number_integer()) {
    g.kind = AlphaGenerator::Kind::integer;
    g.value = f.expression();
    return g;
  }
  if (f.has("list")) {
    if (!allow_list) schema(f.path() + ".list", "explicit lists are only supported for sequences");
    f.allow({"list"});
    g.kind = AlphaGenerator::Kind::list;
    for (const auto& item : f.at("list").items()) g.items.push_back(parse_alpha(item, false));
    if (g.items.empty()) schema(f.path() + ".list", "empty list");
    return g;
  }
  f.allow({"poly", "hint"});
  g.kind = AlphaGenerator::Kind::polynomial;
  for (const auto& c : f.at("poly").items()) g.coefficients.push_back(c.expression());
  if (g.coefficients.size() < 2) schema(f.path() + ".poly", "polynomial of degree >= 1 required");
  const Field hint = f.at("hint");
  const auto parts = hint.items();
  if (parts.size() != 2) schema(hint.path(), "hint is [re, im]");
  g.hint_re = parts[0].rational_expression();
  g.hint_im = parts[1].rational_expression();
  return g;
}

TailMajorant parse_majorant(const Field& f) {
  f.allow({"kind", "c", "r", "epsilon", "s", "bounds", "start"});
  TailMajorant t;
  const std::string kind = f.at("kind").str();
  if (f.has("start")) t.start = f.at("start").integer();
  if (t.start < 1) schema(f.path() + ".start", "start must be >= 1");
  if (kind == "none") {
    t.kind = TailMajorant::Kind::none;
  } else if (kind == "geometric") {
    t.kind = TailMajorant::Kind::geometric;
    t.c = f.at("c").rational();
    t.r = f.at("r").rational();
    if (t.c <= 0) schema(f.path() + ".c", "c must be positive");
    if (t.r <= 0 || t.r >= 1) schema(f.path() + ".r", "r must lie in (0,1)");
  } else if (kind == "power") {
    t.kind = TailMajorant::Kind::power;
    t.epsilon = f.at("epsilon").rational();
    if (t.epsilon <= 0) schema(f.path() + ".epsilon", "epsilon must be positive");
  } else if (kind == "zeta") {
    t.kind = TailMajorant::Kind::zeta;
    t.c = f.at("c").rational();
    t.s = f.at("s").rational();
    if (t.c <= 0) schema(f.path() + ".c", "c must be positive");
    if (t.s <= 1) schema(f.path() + ".s", "s must exceed 1");
  } else if (kind == "explicit") {
    t.kind = TailMajorant::Kind::explicit_list;
    if (f.has("bounds")) {
      for (const auto& b : f.at("bounds").items()) {
        t.bounds.push_back(b.rational());
        if (t.bounds.back() < 0) schema(b.path(), "bounds must be nonnegative");
      }
    }
  } else {
    schema(f.path() + ".kind", "unknown majorant kind '" + kind + "'");
  }
  return t;
}

template <class Spec>
void parse_common(const Field& body, Spec& spec) {
  if (body.has("b")) spec.b = body.at("b").expression();
  if (body.has("epsilon")) spec.epsilon = body.at("epsilon").rational();
  if (spec.epsilon <= 0) schema(body.path() + ".epsilon", "epsilon must be positive");
  if (body.has("e")) spec.e = static_cast<int>(body.at("e").integer());
  if (spec.e != 1 && spec.e != -1) schema(body.path() + ".e", "e must be 1 or -1");
  if (body.has("D")) spec.D = static_cast<int>(body.at("D").integer());
  if (spec.D < 1) schema(body.path() + ".D", "D must be >= 1");
  if (body.has("declared_degrees")) {
    for (const auto& d : body.at("declared_degrees").items()) {
      spec.declared_degrees.push_back(static_cast<int>(d.integer()));
      if (spec.declared_degrees.back() < 1) schema(d.path(), "degrees must be >= 1");
    }
  }
  if (body.has("tail_majorant")) spec.tail = parse_majorant(body.at("tail_majorant"));
  if (body.has("asserted")) {
    for (const auto& a : body.at("asserted").items()) spec.asserted.insert(a.str());
  }
  if (body.has("eventual_start")) {
    const Field es = body.at("eventual_start");
    if (!es.node().is_object()) schema(es.path(), "expected an object");
    for (const auto& [key, value] : es.node().items()) {
      const long v = Field(value, es.path() + "." + key).integer();
      if (v < 1) schema(es.path() + "." + key, "start must be >= 1");
      spec.eventual_start[key] = v;
    }
  }
  if (body.has("length")) {
    spec.length = body.at("length").integer();
    if (*spec.length < 0) schema(body.path() + ".length", "length must be >= 0");
  }
  if (body.has("degree_cap")) spec.degree_cap = static_cast<int>(body.at("degree_cap").integer());
}

SequenceSpec parse_sequence(const Field& body) {
  body.allow({"alpha", "b", "epsilon", "a", "e", "D", "declared_degrees", "tail_majorant", "asserted",
              "eventual_start", "length", "degree_cap"});
  SequenceSpec spec;
  spec.alpha = parse_alpha(body.at("alpha"), true);
  parse_common(body, spec);
  if (body.has("a")) spec.a = body.at("a").rational();
  if (spec.a <= 0 || spec.a >= 1) schema(body.path() + ".a", "a must lie in (0,1)");
  if (spec.alpha.kind == AlphaGenerator::Kind::list) {
    const long n = static_cast<long>(spec.alpha.items.size());
    if (spec.length && *spec.length != n) schema(body.path() + ".length", "length disagrees with the list");
    spec.length = n;
  }
  return spec;
}

ArraySpec parse_array(const Field& body) {
  body.allow({"alpha", "b", "epsilon", "e", "D", "sign_mode", "mode_params", "declared_degrees",
              "tail_majorant", "asserted", "eventual_start", "length", "degree_cap"});
  ArraySpec spec;
  spec.alpha = parse_alpha(body.at("alpha"), false);
  parse_common(body, spec);
  if (body.has("sign_mode")) {
    const std::string mode = body.at("sign_mode").str();
    if (mode == "main") spec.sign_mode = SignMode::main;
    else if (mode == "I") spec.sign_mode = SignMode::I;
    else if (mode == "II") spec.sign_mode = SignMode::II;
    else if (mode == "III") spec.sign_mode = SignMode::III;
    else if (mode == "IV") spec.sign_mode = SignMode::IV;
    else schema(body.path() + ".sign_mode", "unknown sign mode '" + mode + "'");
  }
  if (body.has("mode_params")) {
    const Field mp = body.at("mode_params");
    mp.allow({"X", "R"});
    if (mp.has("X")) spec.X = mp.at("X").rational();
    if (mp.has("R")) spec.R = mp.at("R").rational();
  }
  if (spec.sign_mode == SignMode::IV) {
    if (!spec.X || !spec.R) {
      throw Error(ErrorKind::ModeParamsMissing, "cli.load_spec", "mode IV needs X and R", body.path() + ".mode_params");
    }
    if (*spec.X <= 0 || *spec.X >= 1) schema(body.path() + ".mode_params.X", "X must lie in (0,1)");
    if (*spec.R < 1 || *spec.R * *spec.X >= 1) schema(body.path() + ".mode_params.R", "R must lie in [1, 1/X)");
  }
  return spec;
}

std::vector<LemmaCase> parse_lemmas(const Field& body) {
  body.allow({"cases"});
  std::vector<LemmaCase> out;
  for (const auto& c : body.at("cases").items()) {
    c.allow({"name", "lemma", "a", "epsilon", "delta", "D", "Dn", "N", "k", "prefix", "jump_k", "majorant"});
    LemmaCase lc;
    const std::string id = c.at("lemma").str();
    const auto lemma = lemma_from_string(id);
    if (!lemma) schema(c.path() + ".lemma", "unknown lemma id '" + id + "'");
    lc.lemma = *lemma;
    lc.name = c.has("name") ? c.at("name").str() : id;
    lc.a = c.at("a").rational_expression();
    if (c.has("epsilon")) lc.epsilon = c.at("epsilon").rational();
    if (c.has("delta")) lc.delta = c.at("delta").rational();
    if (c.has("D")) lc.D = static_cast<int>(c.at("D").integer());
    if (c.has("Dn")) lc.Dn = c.at("Dn").expression();
    if (c.has("N")) lc.N = c.at("N").integer();
    if (c.has("k")) lc.k = c.at("k").integer();
    if (c.has("prefix")) lc.prefix = c.at("prefix").integer();
    if (c.has("jump_k")) lc.jump_k = c.at("jump_k").integer();
    if (c.has("majorant")) lc.majorant = parse_majorant(c.at("majorant"));
    if (lc.N < 1 || lc.prefix < 1) schema(c.path(), "N and prefix must be >= 1");
    out.push_back(std::move(lc));
  }
  return out;
}

HeightsBody parse_heights(const Field& body) {
  body.allow({"numbers", "pairs", "triples", "liouville", "degree_cap"});
  HeightsBody h;
  for (const auto& item : body.at("numbers").items()) {
    item.allow({"poly", "hint"});
    PolySpec p;
    for (const auto& c : item.at("poly").items()) p.coefficients.push_back(c.expression());
    const auto hint = item.at("hint").items();
    if (hint.size() != 2) schema(item.path() + ".hint", "hint is [re, im]");
    p.hint_re = hint[0].rational_expression();
    p.hint_im = hint[1].rational_expression();
    h.numbers.push_back(std::move(p));
  }
  if (h.numbers.empty()) schema(body.path() + ".numbers", "empty list");
  if (body.has("pairs")) h.pairs = body.at("pairs").boolean();
  if (body.has("triples")) h.triples = body.at("triples").boolean();
  if (body.has("liouville")) h.liouville = body.at("liouville").boolean();
  if (body.has("degree_cap")) h.degree_cap = static_cast<int>(body.at("degree_cap").integer());
  return h;
}

IntPoly evaluate_template(const std::vector<Expression>& coefficients, long n, long m, const std::string& where) {
  std::vector<mpz_class> c;
  for (const auto& e : coefficients) {
    const Value v = e.eval(n, m);
    if (!v.is_exact()) {
      throw Error(ErrorKind::ExpressionError, where, "polynomial coefficient too large to hold exactly", e.text());
    }
    c.push_back(v.exact());
  }
  return IntPoly(std::move(c));
}

std::string coords(long n, long m) {
  return m == 0 ? "n=" + std::to_string(n) : "n=" + std::to_string(n) + ", m=" + std::to_string(m);
}

// Templates may factor at particular indices (x^2 - (n+m) at n+m = 4); the
// root is then taken from the factor closest to the hint.
AlgebraicNumber nearest_root(const IntPoly& f, const ComplexRational& hint) {
  if (is_irreducible(f)) return select_nearest(f, hint);
  const ComplexBall h(RealBall::from_rational(hint.re, 64), RealBall::from_rational(hint.im, 64));
  std::optional<AlgebraicNumber> best;
  double best_dist = 0;
  for (const auto& g : irreducible_factors(f)) {
    AlgebraicNumber a = select_nearest(g, hint);
    const double d = (approximate(a, 64) - h).abs().to_double();
    if (!best || d < best_dist) {
      best = std::move(a);
      best_dist = d;
    }
  }
  return *best;
}

Term make_term(const AlphaGenerator& g, const Expression& b_expr, long n, long m, long bn, long bm) {
  Term t;
  t.n = n;
  t.m = m;
  t.b = b_expr.eval(bn, bm);
  if (t.b.sign() <= 0) {
    throw Error(ErrorKind::SchemaError, "spec.term", "b must be a positive integer", coords(n, m));
  }
  if (g.kind == AlphaGenerator::Kind::integer) {
    Value v = g.value.eval(n, m);
    if (v.is_zero()) throw Error(ErrorKind::SchemaError, "spec.term", "alpha is zero", coords(n, m));
    t.integer = std::move(v);
    return t;
  }
  const IntPoly f = evaluate_template(g.coefficients, n, m, "spec.term");
  if (f.degree() < 1) throw Error(ErrorKind::SchemaError, "spec.term", "constant polynomial template", coords(n, m));
  const ComplexRational hint{g.hint_re->eval(n, m), g.hint_im->eval(n, m)};
  AlgebraicNumber alpha = nearest_root(f, hint);
  if (alpha.is_zero()) throw Error(ErrorKind::SchemaError, "spec.term", "alpha is zero", coords(n, m));
  if (alpha.is_rational() && alpha.rational_value().get_den() == 1) {
    t.integer = Value(alpha.rational_value().get_num());
  } else {
    t.algebraic = std::move(alpha);
  }
  return t;
}

long start_in(const std::map<std::string, long>& starts, const std::string& id) {
  const auto it = starts.find(id);
  return it == starts.end() ? 1 : it->second;
}

}  // namespace

mpq_class RationalExpr::eval(long n, long m) const {
  const Value a = num.eval(n, m);
  if (!a.is_exact()) throw Error(ErrorKind::ExpressionError, "spec.rational", "value too large", num.text());
  mpq_class q(a.exact());
  if (den) {
    const Value d = den->eval(n, m);
    if (!d.is_exact()) throw Error(ErrorKind::ExpressionError, "spec.rational", "value too large", den->text());
    if (d.is_zero()) throw Error(ErrorKind::ExpressionError, "spec.rational", "zero denominator", den->text());
    q /= mpq_class(d.exact());
    q.canonicalize();
  }
  return q;
}

RationalExpr RationalExpr::parse(const std::string& text) {
  try {
    const mpq_class q = parse_rational(text);
    RationalExpr r{Expression::parse(q.get_num().get_str()), std::nullopt};
    if (q.get_den() != 1) r.den = Expression::parse(q.get_den().get_str());
    return r;
  } catch (const Error&) {
  }
  int depth = 0;
  std::size_t slash = std::string::npos;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    else if (text[i] == ')') --depth;
    else if (text[i] == '/' && depth == 0) {
      if (slash != std::string::npos) {
        throw Error(ErrorKind::ExpressionError, "cli.expression", "at most one top-level '/'",
                    "column " + std::to_string(i + 1) + " in '" + text + "'");
      }
      slash = i;
    }
  }
  if (slash == std::string::npos) return RationalExpr{Expression::parse(text), std::nullopt};
  return RationalExpr{Expression::parse(text.substr(0, slash)), Expression::parse(text.substr(slash + 1))};
}

bool Term::is_algebraic_integer() const { return integer.has_value() || algebraic->is_integer(); }

std::string_view to_string(TailMajorant::Kind kind) {
  switch (kind) {
    case TailMajorant::Kind::none: return "none";
    case TailMajorant::Kind::geometric: return "geometric";
    case TailMajorant::Kind::power: return "power";
    case TailMajorant::Kind::zeta: return "zeta";
    case TailMajorant::Kind::explicit_list: return "explicit";
  }
  return "none";
}

std::string_view to_string(SignMode mode) {
  switch (mode) {
    case SignMode::main: return "main";
    case SignMode::I: return "I";
    case SignMode::II: return "II";
    case SignMode::III: return "III";
    case SignMode::IV: return "IV";
  }
  return "main";
}

std::string_view to_string(LemmaId id) {
  switch (id) {
    case LemmaId::series_upper: return "series_upper";
    case LemmaId::jump: return "jump";
    case LemmaId::series_general: return "series_general";
    case LemmaId::series_fast: return "series_fast";
    case LemmaId::corollary_fast: return "corollary_fast";
    case LemmaId::prod_huge: return "prod_huge";
    case LemmaId::size_of_product: return "size_of_product";
  }
  return "series_upper";
}

std::optional<LemmaId> lemma_from_string(std::string_view s) {
  for (LemmaId id : {LemmaId::series_upper, LemmaId::jump, LemmaId::series_general, LemmaId::series_fast,
                     LemmaId::corollary_fast, LemmaId::prod_huge, LemmaId::size_of_product}) {
    if (to_string(id) == s) return id;
  }
  return std::nullopt;
}

std::string_view to_string(SpecKind kind) {
  switch (kind) {
    case SpecKind::product: return "product";
    case SpecKind::product_of_series: return "product_of_series";
    case SpecKind::lemma: return "lemma";
    case SpecKind::heights: return "heights";
  }
  return "product";
}

Term SequenceSpec::term(long n) const {
  if (n < 1 || (length && n > *length)) {
    throw Error(ErrorKind::InvalidArgument, "spec.term", "index outside the sequence", coords(n, 0));
  }
  if (alpha.kind == AlphaGenerator::Kind::list) {
    return make_term(alpha.items[static_cast<std::size_t>(n - 1)], b, n, 0, n, 0);
  }
  return make_term(alpha, b, n, 0, n, 0);
}

std::vector<Term> SequenceSpec::terms(long N) const {
  std::vector<Term> out;
  const long last = length ? std::min(N, *length) : N;
  for (long n = 1; n <= last; ++n) out.push_back(term(n));
  return out;
}

long SequenceSpec::start_of(const std::string& id) const { return start_in(eventual_start, id); }

Term ArraySpec::term(long n, long m) const {
  if (n < 1 || m < 1 || !present(n, m)) {
    throw Error(ErrorKind::InvalidArgument, "spec.term", "index outside the array", coords(n, m));
  }
  return make_term(alpha, b, n, m, n, m);
}

long ArraySpec::start_of(const std::string& id) const { return start_in(eventual_start, id); }

std::vector<AlgebraicNumber> HeightsBody::build() const {
  std::vector<AlgebraicNumber> out;
  for (const auto& p : numbers) {
    const IntPoly f = evaluate_template(p.coefficients, 0, 0, "spec.heights");
    out.push_back(select_nearest(f, ComplexRational{p.hint_re.eval(0), p.hint_im.eval(0)}));
  }
  return out;
}

SpecDocument parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Recover line and column from the byte offset.
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::ParseError, "cli.load_spec", e.what(),
                "line " + std::to_string(line) + ", column " + std::to_string(col));
  }
  const Field root(doc, "$");
  root.allow({"schema", "kind", "meta", "body"});
  if (root.has("schema") && root.at("schema").integer() != 1) schema("$.schema", "unsupported schema version");
  SpecDocument out;
  const std::string kind = root.at("kind").str();
  if (root.has("meta")) {
    const Field meta = root.at("meta");
    meta.allow({"name", "description"});
    if (meta.has("name")) out.name = meta.at("name").str();
    if (meta.has("description")) out.description = meta.at("description").str();
  }
  const Field body = root.at("body");
  if (kind == "product") {
    out.kind = SpecKind::product;
    out.body = parse_sequence(body);
  } else if (kind == "product_of_series") {
    out.kind = SpecKind::product_of_series;
    out.body = parse_array(body);
  } else if (kind == "lemma") {
    out.kind = SpecKind::lemma;
    out.body = parse_lemmas(body);
  } else if (kind == "heights") {
    out.kind = SpecKind::heights;
    out.body = parse_heights(body);
  } else {
    schema("$.kind", "unknown document kind '" + kind + "'");
  }
  return out;
}

SpecDocument load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cli.load_spec", "cannot open file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

}  // namespace prodcert
