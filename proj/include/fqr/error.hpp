#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fqr {

enum class ErrorCode {
  FieldMismatch,
  InvalidField,
  ParseError,
  ShapeMismatch,
  Singular,
  SubsetSizeMismatch,
  NotComposable,
  UnknownArrow,
  SlotOutOfRange,
  SyntaxError,
  NotStable,
  NotInChart,
  MissingRow,
  IndexMismatch,
  UnknownVariable,
  BudgetExceeded,
  GaveUp,
  SchemaError,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::InvalidField: return "InvalidField";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::SubsetSizeMismatch: return "SubsetSizeMismatch";
    case ErrorCode::NotComposable: return "NotComposable";
    case ErrorCode::UnknownArrow: return "UnknownArrow";
    case ErrorCode::SlotOutOfRange: return "SlotOutOfRange";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::NotStable: return "NotStable";
    case ErrorCode::NotInChart: return "NotInChart";
    case ErrorCode::MissingRow: return "MissingRow";
    case ErrorCode::IndexMismatch: return "IndexMismatch";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::GaveUp: return "GaveUp";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure in the library is reported as an Error carrying a code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fqr
