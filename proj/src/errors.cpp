#include "causal/errors.hpp"

namespace causal {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::InvalidSize: return "InvalidSize";
    case ErrorCode::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::ModelMismatch: return "ModelMismatch";
    case ErrorCode::NonGroupMatrix: return "NonGroupMatrix";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NotEulerElement: return "NotEulerElement";
    case ErrorCode::IncompatibleKind: return "IncompatibleKind";
    case ErrorCode::OutsideChartDomain: return "OutsideChartDomain";
    case ErrorCode::NotOnHypersurface: return "NotOnHypersurface";
    case ErrorCode::NotTangent: return "NotTangent";
    case ErrorCode::NotCausallyRelated: return "NotCausallyRelated";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::ChartSingular: return "ChartSingular";
    case ErrorCode::NotNormalizing: return "NotNormalizing";
  }
  return "Unknown";
}

Tolerances& tolerances() {
  static Tolerances tol;
  return tol;
}

}  // namespace causal
