#pragma once

#include <stdexcept>
#include <string>

namespace fprmt {

enum class ErrorCode {
  kSingular,
  kNonConvergence,
  kCholeskyFailure,
  kOutOfRange,
  kQuadratureFailure,
};

const char* to_string(ErrorCode code);

// Raised for numerical failures. Invalid arguments use std::invalid_argument
// and std::domain_error instead.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSingular: return "SINGULAR";
    case ErrorCode::kNonConvergence: return "NONCONVERGENCE";
    case ErrorCode::kCholeskyFailure: return "CHOLESKY-FAILURE";
    case ErrorCode::kOutOfRange: return "OUT-OF-RANGE";
    case ErrorCode::kQuadratureFailure: return "QUADRATURE-FAILURE";
  }
  return "UNKNOWN";
}

}  // namespace fprmt
