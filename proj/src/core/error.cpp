#include "core/error.hpp"

namespace rankgauge {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MagicMismatch: return "MagicMismatch";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::UnsupportedDtype: return "UnsupportedDtype";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::NonFiniteData: return "NonFiniteData";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::DuplicateRunId: return "DuplicateRunId";
    case ErrorCode::UnorderedValues: return "UnorderedValues";
    case ErrorCode::EmptyManifest: return "EmptyManifest";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::InsufficientPositiveEigenvalues:
      return "InsufficientPositiveEigenvalues";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::MissingRank: return "MissingRank";
    case ErrorCode::MissingAlpha: return "MissingAlpha";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace rankgauge
