#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace g2lab {

enum class ErrorKind {
    Parse,
    DegreeMismatch,
    Mode,
    NinthRootIrrational,
    NotAUnit,
    NotClosed,
    NotPositive,
    NotERP,
    Inconsistency,
    GuardViolation,
    Inconclusive,
    InvalidArgument,
    UnknownName,
};

std::string_view error_name(ErrorKind kind);

/// Every computational failure in the library is reported through this type.
/// `name()` is the stable identifier printed by the command-line tool.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept { return error_name(kind_); }

private:
    ErrorKind kind_;
};

inline std::string_view error_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::Mode: return "ModeError";
    case ErrorKind::NinthRootIrrational: return "NinthRootIrrational";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NotERP: return "NotERP";
    case ErrorKind::Inconsistency: return "Inconsistency";
    case ErrorKind::GuardViolation: return "GuardViolation";
    case ErrorKind::Inconclusive: return "Inconclusive";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UnknownName: return "UnknownName";
    }
    return "Error";
}

} // namespace g2lab
