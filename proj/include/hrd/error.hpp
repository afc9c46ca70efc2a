// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace hrd {

enum class ErrorCode {
  InvalidSignal,
  InvalidConfig,
  GridMismatch,
  ShapeMismatch,
  EmptyBoundary,
  Unsupported,
  NumericalFailure,
  Blowup,
  NonContraction,
  NonsmoothPoint,
  StalledDescent,
  Io,
};

const char* to_string(ErrorCode code);

/// Exit status used by the command-line front end for a given error.
/// 2 = validation, 3 = numeric failure, 4 = non-contraction.
int exit_status(ErrorCode code);

/// Library exception. `field()` carries a dotted config path
/// (e.g. "hysteresis.a") when the error stems from validation.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string field = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

}  // namespace hrd
