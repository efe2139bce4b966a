#include "gorga/error.hpp"

#include <fmt/format.h>

namespace gorga {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::UnbalancedBracket: return "UnbalancedBracket";
        case ErrorCode::UnbalancedGuard: return "UnbalancedGuard";
        case ErrorCode::DuplicateProduction: return "DuplicateProduction";
        case ErrorCode::EmptyAxiom: return "EmptyAxiom";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::StackUnderflow: return "StackUnderflow";
        case ErrorCode::InvalidStart: return "InvalidStart";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::InvalidScales: return "InvalidScales";
        case ErrorCode::InsufficientScales: return "InsufficientScales";
        case ErrorCode::UnsupportedKind: return "UnsupportedKind";
        case ErrorCode::UnreadableFile: return "UnreadableFile";
        case ErrorCode::BlankImage: return "BlankImage";
        case ErrorCode::UnknownRule: return "UnknownRule";
        case ErrorCode::SchemaViolation: return "SchemaViolation";
        case ErrorCode::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

ParseError::ParseError(ErrorCode code, const std::string& message, int line, int column)
    : Error(code, fmt::format("{}:{}: {}: {}", line, column, to_string(code), message)),
      line_(line),
      column_(column) {}

ConfigError::ConfigError(ErrorCode code, std::string field, const std::string& message)
    : Error(code, fmt::format("{}: {}: {}", to_string(code), field, message)),
      field_(std::move(field)) {}

}  // namespace gorga
