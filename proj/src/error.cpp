// SPDX-License-Identifier: Apache-2.0
#include "hrd/error.hpp"

namespace hrd {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSignal: return "invalid-signal";
    case ErrorCode::InvalidConfig: return "invalid-config";
    case ErrorCode::GridMismatch: return "grid-mismatch";
    case ErrorCode::ShapeMismatch: return "shape-mismatch";
    case ErrorCode::EmptyBoundary: return "empty-boundary";
    case ErrorCode::Unsupported: return "unsupported-configuration";
    case ErrorCode::NumericalFailure: return "numerical-failure";
    case ErrorCode::Blowup: return "blowup";
    case ErrorCode::NonContraction: return "non-contraction";
    case ErrorCode::NonsmoothPoint: return "nonsmooth-point";
    case ErrorCode::StalledDescent: return "stalled-descent";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::NumericalFailure:
    case ErrorCode::Blowup:
    case ErrorCode::NonsmoothPoint:
    case ErrorCode::StalledDescent:
      return 3;
    case ErrorCode::NonContraction:
      return 4;
    default:
      return 2;
  }
}

static std::string decorate(ErrorCode code, const std::string& message,
                            const std::string& field) {
  std::string out = to_string(code);
  out += ": ";
  if (!field.empty()) {
    out += field;
    out += ": ";
  }
  out += message;
  return out;
}

Error::Error(ErrorCode code, const std::string& message, std::string field)
    : std::runtime_error(decorate(code, message, field)),
      code_(code),
      field_(std::move(field)) {}

}  // namespace hrd
