#pragma once

#include <stdexcept>
#include <string>

namespace causal {

enum class ErrorCode {
  UnsupportedFamily,
  InvalidSize,
  AlgebraMismatch,
  NumericalFailure,
  ModelMismatch,
  NonGroupMatrix,
  IndexOutOfRange,
  NotEulerElement,
  IncompatibleKind,
  OutsideChartDomain,
  NotOnHypersurface,
  NotTangent,
  NotCausallyRelated,
  SizeMismatch,
  NotUnitary,
  ChartSingular,
  NotNormalizing,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Global numerical tolerances. `algebra` is used for pure algebraic identities,
// `exp` for anything involving matrix exponentials or finite differences.
struct Tolerances {
  double algebra = 1e-9;
  double exp = 1e-6;
};

Tolerances& tolerances();

}  // namespace causal
