#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sociallearn {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  IndeterminatePosterior,
  ResourceLimit,
  PreconditionViolated,
  ParameterViolation,
  HypothesisViolated,
  ShapeMismatch,
  ProfileIncomplete,
  InternalDisagreement,
};

constexpr std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IndeterminatePosterior: return "IndeterminatePosterior";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::ParameterViolation: return "ParameterViolation";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ProfileIncomplete: return "ProfileIncomplete";
    case ErrorCode::InternalDisagreement: return "InternalDisagreement";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// front-ends can report it as a single machine-readable token.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace sociallearn
