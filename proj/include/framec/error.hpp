#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace framec {

enum class ErrorKind {
    NonFinite,
    DimensionMismatch,
    RankDeficient,
    NotAFrame,
    BadShape,
    NotZeroColumn,
    ZeroWeight,
    NotDualPair,
    ParseError,
    MixedField,
    NotAFamily,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the ErrorKind tags so
/// callers (notably the CLI) can map it to an exit code without string parsing.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace framec
