#pragma once

#include <stdexcept>
#include <string>

namespace hvcheck {

enum class ErrorCode {
    InvalidRegion,
    TimeNotOutsideRegion,
    BadTimeOrder,
    EnumerationBudget,
    UnsupportedLawKind,
    NullCondition,
    PreconditionFailed,
    SearchBudget,
    BadTable,
    UnsupportedAngle,
    NullSettings,
    BadFamily,
    ParseError,
    ValidationError,
    Overflow,
};

const char* error_code_name(ErrorCode c);

/// Domain error carrying a machine-readable code; parse errors also carry a line.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          code_(code), line_(line) {}

    ErrorCode code() const { return code_; }
    int line() const { return line_; }

private:
    ErrorCode code_;
    int line_;
};

} // namespace hvcheck
