#include "prodcert/error.hpp"

namespace prodcert {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::Reducible: return "Reducible";
    case ErrorKind::AmbiguousSelector: return "AmbiguousSelector";
    case ErrorKind::PrecisionBudgetExceeded: return "PrecisionBudgetExceeded";
    case ErrorKind::ZeroReciprocal: return "ZeroReciprocal";
    case ErrorKind::FactorSelectionAmbiguous: return "FactorSelectionAmbiguous";
    case ErrorKind::DegreeCapExceeded: return "DegreeCapExceeded";
    case ErrorKind::ConjugatePair: return "ConjugatePair";
    case ErrorKind::MissingDegrees: return "MissingDegrees";
    case ErrorKind::NonIntegerAlpha: return "NonIntegerAlpha";
    case ErrorKind::ModeParamsMissing: return "ModeParamsMissing";
    case ErrorKind::TermMagnitude: return "TermMagnitude";
    case ErrorKind::FactorNearZero: return "FactorNearZero";
    case ErrorKind::MajorantUnverified: return "MajorantUnverified";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::GuardFailed: return "GuardFailed";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::ExpressionError: return "ExpressionError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorKind kind, const std::string& where,
                    const std::string& message, const std::string& context) {
  std::string out(to_string(kind));
  out += " in ";
  out += where;
  out += ": ";
  out += message;
  if (!context.empty()) {
    out += " [";
    out += context;
    out += "]";
  }
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, std::string where, std::string message,
             std::string context)
    : std::runtime_error(compose(kind, where, message, context)),
      kind_(kind),
      where_(std::move(where)),
      message_(std::move(message)),
      context_(std::move(context)) {}

}  // namespace prodcert
