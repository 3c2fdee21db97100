#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace prodcert {

enum class ErrorKind {
  // algebra
  ZeroPolynomial,
  Reducible,
  AmbiguousSelector,
  PrecisionBudgetExceeded,
  ZeroReciprocal,
  FactorSelectionAmbiguous,
  DegreeCapExceeded,
  // heights
  ConjugatePair,
  // criteria
  MissingDegrees,
  NonIntegerAlpha,
  ModeParamsMissing,
  // evaluator
  TermMagnitude,
  FactorNearZero,
  MajorantUnverified,
  BudgetExhausted,
  // lemmalab
  PreconditionFailed,
  GuardFailed,
  // cli
  ParseError,
  SchemaError,
  ExpressionError,
  // generic
  InvalidArgument,
  Internal,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the toolkit. `where` names the module and
/// operation ("algebra.make_algebraic") and `context` carries input
/// coordinates such as an index or a field path.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string where, std::string message,
        std::string context = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& where() const noexcept { return where_; }
  const std::string& context() const noexcept { return context_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string where_;
  std::string message_;
  std::string context_;
};

}  // namespace prodcert
