#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace gdt {

enum class FailureReason {
  ParseEmpty,
  ParseError,
  DanglingReference,
  NoPathToSink,
  MissingRequiredParam,
  DeadlockDetected,
  RuntimeError,
};

std::string_view failure_reason_name(FailureReason reason) noexcept;
std::optional<FailureReason> failure_reason_from_name(std::string_view name) noexcept;

// Result of importing and running one script.
struct ExecOutcome {
  bool success = true;
  FailureReason reason = FailureReason::RuntimeError;  // meaningful only on failure
  std::string detail;

  static ExecOutcome ok() { return {}; }
  static ExecOutcome failure(FailureReason reason, std::string detail = {}) {
    return ExecOutcome{false, reason, std::move(detail)};
  }

  // "Success" or "Failure(<Reason>)".
  std::string label() const {
    return success ? "Success" : "Failure(" + std::string(failure_reason_name(reason)) + ")";
  }
};

inline std::string_view failure_reason_name(FailureReason reason) noexcept {
  switch (reason) {
    case FailureReason::ParseEmpty: return "ParseEmpty";
    case FailureReason::ParseError: return "ParseError";
    case FailureReason::DanglingReference: return "DanglingReference";
    case FailureReason::NoPathToSink: return "NoPathToSink";
    case FailureReason::MissingRequiredParam: return "MissingRequiredParam";
    case FailureReason::DeadlockDetected: return "DeadlockDetected";
    case FailureReason::RuntimeError: return "RuntimeError";
  }
  return "RuntimeError";
}

inline std::optional<FailureReason> failure_reason_from_name(std::string_view name) noexcept {
  for (auto r : {FailureReason::ParseEmpty, FailureReason::ParseError,
                 FailureReason::DanglingReference, FailureReason::NoPathToSink,
                 FailureReason::MissingRequiredParam, FailureReason::DeadlockDetected,
                 FailureReason::RuntimeError}) {
    if (failure_reason_name(r) == name) return r;
  }
  return std::nullopt;
}

}  // namespace gdt
