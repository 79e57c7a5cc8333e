#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qforge {

enum class ErrorKind {
  DivisionByZero,
  ZeroDenominator,
  InvalidDomain,
  NotTerminating,
  NoConvergence,
  NotInTable,
  BudgetExceeded,
  VerificationFailed,
  UndefinedAction,
  NoRepresentativeFound,
  SamplingExhausted,
  DegenerateFamily,
  DegenerateParameter,
  ConstraintViolated,
  ParseError,
  Usage,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qforge
