#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ringflow {

enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  DegenerateFiber,
  BoundaryTarget,
  SingularMatrix,
  NoConvergence,
  StepUnderflow,
  MaxSteps,
  Timeout,
  StateEscape,
  Io,
};

std::string_view to_string(ErrorCode code);

/// True for failures of the numerics (as opposed to malformed input).
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ringflow
