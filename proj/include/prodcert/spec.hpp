#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "prodcert/algebraic.hpp"
#include "prodcert/expr.hpp"

namespace prodcert {

/// num or num/den, both generator expressions.
struct RationalExpr {
  Expression num;
  std::optional<Expression> den;

  mpq_class eval(long n, long m = 0) const;
  static RationalExpr parse(const std::string& text);
};

/// How alpha is produced at each index.
struct AlphaGenerator {
  enum class Kind { integer, polynomial, list };
  Kind kind = Kind::integer;
  Expression value;
  /// Polynomial template, lowest degree first, with a root hint.
  std::vector<Expression> coefficients;
  std::optional<RationalExpr> hint_re;
  std::optional<RationalExpr> hint_im;
  /// Finite explicit sequence (one-dimensional specs only).
  std::vector<AlphaGenerator> items;
};

/// One factor's data: b and either a rational integer alpha (exact or huge)
/// or an algebraic alpha with its certified selector.
struct Term {
  long n = 0;
  long m = 0;
  Value b;
  std::optional<Value> integer;
  std::optional<AlgebraicNumber> algebraic;

  bool is_real_integer() const noexcept { return integer.has_value(); }
  bool is_algebraic_integer() const;
};

/// Bound on |b_n/alpha_n| for n >= start (or on the anti-diagonal sums for
/// arrays).
struct TailMajorant {
  enum class Kind { none, geometric, power, zeta, explicit_list };
  Kind kind = Kind::none;
  mpq_class c = 1;
  mpq_class r;
  /// power: alpha_n/b_n increases and exceeds n^(1+epsilon).
  mpq_class epsilon;
  /// zeta: c n^-s with s > 1.
  mpq_class s;
  /// explicit_list: bounds for start, start+1, ...; zero afterwards.
  std::vector<mpq_class> bounds;
  long start = 1;
};

std::string_view to_string(TailMajorant::Kind kind);

enum class SignMode { main, I, II, III, IV };
std::string_view to_string(SignMode mode);

struct SequenceSpec {
  AlphaGenerator alpha;
  Expression b = Expression::parse("1");
  mpq_class epsilon = mpq_class(1, 2);
  mpq_class a = mpq_class(1, 2);
  int e = 1;
  int D = 1;
  std::vector<int> declared_degrees;
  TailMajorant tail;
  std::set<std::string> asserted;
  /// Validity start per eventual hypothesis id; 1 when absent.
  std::map<std::string, long> eventual_start;
  /// Terms past this index are absent (factor 1).
  std::optional<long> length;
  int degree_cap = kDefaultDegreeCap;

  Term term(long n) const;
  /// Terms 1..N (stops early at `length`).
  std::vector<Term> terms(long N) const;
  long start_of(const std::string& id) const;
};

struct ArraySpec {
  AlphaGenerator alpha;
  Expression b = Expression::parse("1");
  mpq_class epsilon = mpq_class(1, 2);
  int e = 1;
  int D = 1;
  SignMode sign_mode = SignMode::main;
  std::optional<mpq_class> X;
  std::optional<mpq_class> R;
  /// Declared D_n = [K_n : Q].
  std::vector<int> declared_degrees;
  TailMajorant tail;
  std::set<std::string> asserted;
  std::map<std::string, long> eventual_start;
  /// Entries with n + m - 1 past this anti-diagonal are absent.
  std::optional<long> length;
  int degree_cap = kDefaultDegreeCap;

  Term term(long n, long m) const;
  bool present(long n, long m) const { return !length || n + m - 1 <= *length; }
  long start_of(const std::string& id) const;
};

enum class LemmaId { series_upper, jump, series_general, series_fast, corollary_fast, prod_huge, size_of_product };
std::string_view to_string(LemmaId id);
std::optional<LemmaId> lemma_from_string(std::string_view s);

struct LemmaCase {
  std::string name;
  LemmaId lemma = LemmaId::series_upper;
  /// The sequence a_n.
  RationalExpr a;
  mpq_class epsilon = 1;
  mpq_class delta = 0;
  int D = 1;
  /// D_n for prod_huge.
  Expression Dn = Expression::parse("1");
  /// The lemma's N (or t for the corollary).
  long N = 1;
  /// Interval end k for the corollary.
  long k = 1;
  /// Explicit terms summed (or searched) before the majorant takes over.
  long prefix = 50;
  std::optional<long> jump_k;
  TailMajorant majorant;
};

struct PolySpec {
  std::vector<Expression> coefficients;
  RationalExpr hint_re;
  RationalExpr hint_im;
};

struct HeightsBody {
  std::vector<PolySpec> numbers;
  bool pairs = true;
  bool triples = false;
  bool liouville = true;
  int degree_cap = kDefaultDegreeCap;

  std::vector<AlgebraicNumber> build() const;
};

enum class SpecKind { product, product_of_series, lemma, heights };
std::string_view to_string(SpecKind kind);

struct SpecDocument {
  SpecKind kind = SpecKind::product;
  std::string name;
  std::string description;
  std::variant<SequenceSpec, ArraySpec, std::vector<LemmaCase>, HeightsBody> body;
};

/// Reads and validates a spec file. ParseError carries line and column,
/// SchemaError the offending field path.
SpecDocument load_spec(const std::string& path);
SpecDocument parse_spec(const std::string& text);

}  // namespace prodcert
