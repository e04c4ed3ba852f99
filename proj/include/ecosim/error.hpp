#pragma once

#include <stdexcept>
#include <string>

namespace ecosim {

enum class ErrorCode {
  UnknownKind,
  UnknownEntity,
  UnknownProperty,
  DimensionMismatch,
  DuplicateKind,
  CycleRejected,
  NoReferent,
  AmbiguousReferent,
  ParseError,
  NotEcoStatement,
  NotFactStatement,
  UnresolvedReferent,
  LibraryNotFound,
  DuplicateLibrary,
  NotSituationRule,
  SpecificRuleNotPromotable,
  UnknownRule,
  IoError,
};

const char* to_string(ErrorCode code);

/// Engine error. Deny results from the emulator are values, not errors.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ecosim
