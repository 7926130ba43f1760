#pragma once

#include <stdexcept>
#include <string>

namespace varfrac {

// Error categories surfaced through the C API as status codes.
enum class ErrorCode {
    Io = 1,
    Parse,
    Validation,
    Evaluation,
    Hypothesis,
    Inadmissible,
    BracketFailure,
    GradingOverflow,
    EmptyZeroSet,
    DegenerateDictionary,
    EscapeFailure,
    PathCollapse,
    BoundaryTrap,
    SearchExhausted,
    NotConverged,
    Argument,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Syntax errors in exponent expressions carry the byte offset of the failure.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& what)
        : Error(ErrorCode::Parse, what + " at offset " + std::to_string(offset)),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

} // namespace varfrac
