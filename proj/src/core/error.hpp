#pragma once

#include <stdexcept>
#include <string>

namespace rankgauge {

// Failure classes surfaced by the library. The CLI groups them into exit
// codes: ingest/validation -> 1, numeric -> 2, missing inputs -> 3.
enum class ErrorCode {
  IoError,
  MagicMismatch,
  UnsupportedVersion,
  UnsupportedDtype,
  UnsupportedOrder,
  ShapeError,
  NonFiniteData,
  RaggedRows,
  ParseError,
  SchemaError,
  DuplicateRunId,
  UnorderedValues,
  EmptyManifest,
  ConvergenceFailure,
  InsufficientPositiveEigenvalues,
  DegenerateFit,
  MissingRank,
  MissingAlpha,
  ZeroVariance,
  LengthMismatch,
  LabelMismatch,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace rankgauge
