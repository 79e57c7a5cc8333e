#include "qforge/error.hpp"

namespace qforge {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::InvalidDomain: return "InvalidDomain";
    case ErrorKind::NotTerminating: return "NotTerminating";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotInTable: return "NotInTable";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::UndefinedAction: return "UndefinedAction";
    case ErrorKind::NoRepresentativeFound: return "NoRepresentativeFound";
    case ErrorKind::SamplingExhausted: return "SamplingExhausted";
    case ErrorKind::DegenerateFamily: return "DegenerateFamily";
    case ErrorKind::DegenerateParameter: return "DegenerateParameter";
    case ErrorKind::ConstraintViolated: return "ConstraintViolated";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace qforge
