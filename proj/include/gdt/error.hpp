#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gdt {

enum class ErrorCode {
  // distribution expressions
  UnknownFamily,
  ArityMismatch,
  ArgumentOutOfRange,
  MalformedExpression,
  // scripts
  DanglingReference,
  UnemittableScript,
  // metrics
  EmptyReference,
  EmptyBatch,
  EmptyInput,
  // statistics
  InsufficientSamples,
  // model building
  NoPathToSink,
  MissingRequiredParam,
  InvalidParameter,
  // generation / cli
  InvalidConstraint,
  InvalidConfig,
  InvalidArgument,
  MissingPair,
  IoError,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string token = {})
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        token_(std::move(token)) {}

  ErrorCode code() const noexcept { return code_; }

  // Offending source token, when the error is attributable to one.
  const std::string& token() const noexcept { return token_; }

 private:
  ErrorCode code_;
  std::string token_;
};

inline std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownFamily: return "UnknownFamily";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::ArgumentOutOfRange: return "ArgumentOutOfRange";
    case ErrorCode::MalformedExpression: return "MalformedExpression";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::UnemittableScript: return "UnemittableScript";
    case ErrorCode::EmptyReference: return "EmptyReference";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::NoPathToSink: return "NoPathToSink";
    case ErrorCode::MissingRequiredParam: return "MissingRequiredParam";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::InvalidConstraint: return "InvalidConstraint";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingPair: return "MissingPair";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace gdt
