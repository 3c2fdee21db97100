#include "prodcert/expr.hpp"

#include <cctype>
#include <vector>

#include "prodcert/error.hpp"

namespace prodcert {

namespace {

[[noreturn]] void fail(const std::string& message, const std::string& context = {}) {
  throw Error(ErrorKind::ExpressionError, "cli.expression", message, context);
}

std::size_t bits(const mpz_class& z) { return z == 0 ? 0 : mpz_sizeinbase(z.get_mpz_t(), 2); }

// log2(2^x + 2^y) or log2(2^x - 2^y) for x the larger operand.
RealBall log_combine(const RealBall& x, const RealBall& y, bool subtract) {
  const RealBall d = exp2(y - x);
  const RealBall one = RealBall::from_si(1, x.precision());
  if (!subtract) return x + log2(one + d);
  const RealBall rest = one - d;
  if (!rest.certainly_positive()) fail("cancellation between huge operands cannot be resolved");
  return x + log2(rest);
}

}  // namespace

Value::Value(const mpz_class& z) : exact_(z), sign_(sgn(z)) {}

Value Value::huge(int sign, RealBall log2_abs) {
  Value v;
  v.exact_.reset();
  v.sign_ = sign;
  v.log2_ = std::move(log2_abs);
  return v;
}

const mpz_class& Value::exact() const {
  if (!exact_) throw Error(ErrorKind::Internal, "cli.expression", "value is not exact");
  return *exact_;
}

RealBall Value::log2_abs(Precision prec) const {
  if (sign_ == 0) throw Error(ErrorKind::Internal, "cli.expression", "log2 of zero");
  if (exact_) return log2(RealBall::from_integer(abs(*exact_), prec));
  return log2_.with_precision(prec);
}

RealBall Value::ball(Precision prec) const {
  if (exact_) return RealBall::from_integer(*exact_, prec);
  const RealBall mag = exp2(log2_.with_precision(prec));
  return sign_ < 0 ? -mag : mag;
}

std::string Value::to_string() const {
  if (exact_ && bits(*exact_) <= 256) return exact_->get_str();
  if (sign_ == 0) return "0";
  return std::string(sign_ < 0 ? "-" : "") + "2^(" + log2_abs().mid().to_string(17) + ")";
}

Value operator-(const Value& a) {
  if (a.is_exact()) return Value(mpz_class(-a.exact()));
  return Value::huge(-a.sign(), a.log2_abs());
}

Value operator+(const Value& a, const Value& b) {
  if (a.is_exact() && b.is_exact()) return Value(mpz_class(a.exact() + b.exact()));
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const RealBall la = a.log2_abs();
  const RealBall lb = b.log2_abs();
  const bool a_big = compare(la.mid(), lb.mid()) >= 0;
  const Value& big = a_big ? a : b;
  const RealBall& lbig = a_big ? la : lb;
  const RealBall& lsmall = a_big ? lb : la;
  return Value::huge(big.sign(), log_combine(lbig, lsmall, a.sign() != b.sign()));
}

Value operator-(const Value& a, const Value& b) { return a + (-b); }

Value operator*(const Value& a, const Value& b) {
  if (a.is_zero() || b.is_zero()) return Value(0);
  if (a.is_exact() && b.is_exact() && bits(a.exact()) + bits(b.exact()) <= kExactBitLimit) {
    return Value(mpz_class(a.exact() * b.exact()));
  }
  return Value::huge(a.sign() * b.sign(), a.log2_abs() + b.log2_abs());
}

Value power(const Value& base, const Value& exponent) {
  if (exponent.sign() < 0) fail("negative exponent");
  if (exponent.is_zero()) return Value(1);
  if (base.is_zero()) return Value(0);
  if (base.is_exact() && abs(base.exact()) == 1) {
    if (base.exact() == 1) return Value(1);
    if (!exponent.is_exact()) fail("parity of a huge exponent of -1 is unknown");
    return Value(mpz_class(mpz_odd_p(exponent.exact().get_mpz_t()) ? -1 : 1));
  }
  int sign = 1;
  if (base.sign() < 0) {
    if (!exponent.is_exact()) fail("parity of a huge exponent of a negative base is unknown");
    if (mpz_odd_p(exponent.exact().get_mpz_t())) sign = -1;
  }
  if (base.is_exact() && exponent.is_exact() && exponent.exact().fits_ulong_p() &&
      exponent.exact().get_ui() <= kExactBitLimit / bits(base.exact())) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.exact().get_mpz_t(), exponent.exact().get_ui());
    return Value(r);
  }
  return Value::huge(sign, exponent.ball(kLogPrecision) * base.log2_abs());
}

Value factorial(const Value& a) {
  if (!a.is_exact() || a.sign() < 0) fail("factorial needs a nonnegative exact integer");
  if (!a.exact().fits_ulong_p() || a.exact().get_ui() > 2000000) fail("factorial argument too large");
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), a.exact().get_ui());
  return Value(r);
}

Certainty value_less(const Value& a, const Value& b) {
  if (a.is_exact() && b.is_exact()) return a.exact() < b.exact() ? Certainty::certain : Certainty::refuted;
  if (a.sign() != b.sign()) return a.sign() < b.sign() ? Certainty::certain : Certainty::refuted;
  if (a.is_zero()) return Certainty::refuted;
  const RealBall la = a.log2_abs();
  const RealBall lb = b.log2_abs();
  const RealBall& lo = a.sign() > 0 ? la : lb;
  const RealBall& hi = a.sign() > 0 ? lb : la;
  if (less(lo, hi) == Certainty::certain) return Certainty::certain;
  if (less(hi, lo) == Certainty::certain) return Certainty::refuted;
  return Certainty::unknown;
}

struct Expression::Node {
  enum class Kind { literal, var_n, var_m, add, sub, mul, pow, neg, fact } kind;
  mpz_class literal;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse_all(bool& uses_m) {
    NodePtr e = expr();
    skip();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    uses_m = uses_m_;
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& message) const {
    fail(message, "column " + std::to_string(pos_ + 1) + " in '" + text_ + "'");
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr make(Kind k, NodePtr l = nullptr, NodePtr r = nullptr) {
    auto node = std::make_shared<Expression::Node>();
    node->kind = k;
    node->lhs = std::move(l);
    node->rhs = std::move(r);
    return node;
  }

  NodePtr expr() {
    NodePtr e = term();
    for (;;) {
      if (accept('+')) e = make(Kind::add, e, term());
      else if (accept('-')) e = make(Kind::sub, e, term());
      else return e;
    }
  }

  NodePtr term() {
    NodePtr e = unary();
    while (accept('*')) e = make(Kind::mul, e, unary());
    return e;
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::neg, unary());
    NodePtr base = postfix();
    if (accept('^')) return make(Kind::pow, base, unary());
    return base;
  }

  NodePtr postfix() {
    NodePtr e = primary();
    while (accept('!')) e = make(Kind::fact, e);
    return e;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= text_.size()) error("unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      auto node = std::make_shared<Expression::Node>();
      node->kind = Kind::literal;
      node->literal = mpz_class(text_.substr(start, pos_ - start), 10);
      return node;
    }
    if (c == 'n' || c == 'm') {
      ++pos_;
      if (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) {
        error("unknown identifier");
      }
      if (c == 'm') uses_m_ = true;
      return make(c == 'n' ? Kind::var_n : Kind::var_m);
    }
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) error("expected ')'");
      return e;
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  bool uses_m_ = false;
};

Value eval_node(const Expression::Node& node, long n, long m) {
  switch (node.kind) {
    case Kind::literal: return Value(node.literal);
    case Kind::var_n: return Value(n);
    case Kind::var_m: return Value(m);
    case Kind::add: return eval_node(*node.lhs, n, m) + eval_node(*node.rhs, n, m);
    case Kind::sub: return eval_node(*node.lhs, n, m) - eval_node(*node.rhs, n, m);
    case Kind::mul: return eval_node(*node.lhs, n, m) * eval_node(*node.rhs, n, m);
    case Kind::pow: return power(eval_node(*node.lhs, n, m), eval_node(*node.rhs, n, m));
    case Kind::neg: return -eval_node(*node.lhs, n, m);
    case Kind::fact: return factorial(eval_node(*node.lhs, n, m));
  }
  fail("corrupt expression");
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  Parser parser(e.text_);
  e.root_ = parser.parse_all(e.uses_m_);
  return e;
}

Value Expression::eval(long n, long m) const {
  try {
    return eval_node(*root_, n, m);
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::ExpressionError) throw;
    throw Error(ErrorKind::ExpressionError, "cli.expression", err.message(),
                "'" + text_ + "' at n=" + std::to_string(n) + ", m=" + std::to_string(m));
  }
}

mpq_class parse_rational(const std::string& text) {
  auto bad = [&] { return Error(ErrorKind::ParseError, "cli.rational", "not a rational number", text); };
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw bad();
  try {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      mpq_class q(mpz_class(s.substr(0, slash), 10), mpz_class(s.substr(slash + 1), 10));
      if (q.get_den() == 0) throw bad();
      q.canonicalize();
      return q;
    }
    const auto e = s.find_first_of("eE");
    std::string mant = s.substr(0, e);
    long exp10 = e == std::string::npos ? 0 : std::stol(s.substr(e + 1));
    const auto dot = mant.find('.');
    if (dot != std::string::npos) {
      exp10 -= static_cast<long>(mant.size() - dot - 1);
      mant.erase(dot, 1);
    }
    if (mant.empty() || mant == "-" || mant == "+") throw bad();
    if (mant.front() == '+') mant.erase(0, 1);
    mpq_class q(mpz_class(mant, 10));
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    if (exp10 < 0) q /= scale;
    else q *= scale;
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw bad();
  } catch (const std::out_of_range&) {
    throw bad();
  }
}

}  // namespace prodcert
