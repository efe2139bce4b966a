#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gorga {

enum class ErrorCode {
    SyntaxError,
    UnbalancedBracket,
    UnbalancedGuard,
    DuplicateProduction,
    EmptyAxiom,
    BudgetExceeded,
    StackUnderflow,
    InvalidStart,
    EmptyInput,
    InvalidScales,
    InsufficientScales,
    UnsupportedKind,
    UnreadableFile,
    BlankImage,
    UnknownRule,
    SchemaViolation,
    IoFailure,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Parse failure with a 1-based source location.
class ParseError : public Error {
public:
    ParseError(ErrorCode code, const std::string& message, int line, int column);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

// Config validation failure naming the offending JSON field path ("shape.params.x0").
class ConfigError : public Error {
public:
    ConfigError(ErrorCode code, std::string field, const std::string& message);

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace gorga
