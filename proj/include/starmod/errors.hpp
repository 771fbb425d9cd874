#pragma once

#include <stdexcept>
#include <string>

namespace starmod {

enum class ErrorKind {
    NotHermitian,
    NotPSD,
    ShapeMismatch,
    NotPositiveOnAlgebra,
    NotNormalized,
    NotUnitVector,
    NotInAlgebra,
    NormNotAttainedPositively,
    BadProblem,
    NotTernary,
    AnchorNotUnit,
    AnchorNotInModule,
    AnchorNotShared,
    ImageNotClosed,
    MixedAlgebras,
    DomainMismatch,
    DivisionByZero,
    AmbientNotFull,
    UnknownScenario,
    ParseError,
    ValidationError,
    CheckError,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NotPSD: return "NotPSD";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::NotPositiveOnAlgebra: return "NotPositiveOnAlgebra";
        case ErrorKind::NotNormalized: return "NotNormalized";
        case ErrorKind::NotUnitVector: return "NotUnitVector";
        case ErrorKind::NotInAlgebra: return "NotInAlgebra";
        case ErrorKind::NormNotAttainedPositively: return "NormNotAttainedPositively";
        case ErrorKind::BadProblem: return "BadProblem";
        case ErrorKind::NotTernary: return "NotTernary";
        case ErrorKind::AnchorNotUnit: return "AnchorNotUnit";
        case ErrorKind::AnchorNotInModule: return "AnchorNotInModule";
        case ErrorKind::AnchorNotShared: return "AnchorNotShared";
        case ErrorKind::ImageNotClosed: return "ImageNotClosed";
        case ErrorKind::MixedAlgebras: return "MixedAlgebras";
        case ErrorKind::DomainMismatch: return "DomainMismatch";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::AmbientNotFull: return "AmbientNotFull";
        case ErrorKind::UnknownScenario: return "UnknownScenario";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
        case ErrorKind::CheckError: return "CheckError";
    }
    return "Unknown";
}

/// Single exception type for the whole library; `kind()` carries the
/// machine-readable category that certificates and the CLI report.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

} // namespace starmod
