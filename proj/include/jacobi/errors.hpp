#pragma once

#include <stdexcept>
#include <string>

namespace jacobi {

enum class ErrorKind {
    NotCoprime,
    ConductorMismatch,
    EvenModulus,
    NotPrimePower,
    NoMatch,
    ConductorTooSmall,
    NotInvertible,
    SignatureParity,
    NotCovered,
    NoExplicitBasis,
    HypothesisViolation,
    ShapeViolation,
    UnknownId,
    NotIndexM,
    DimensionMismatch,
    GuardExceeded,
    InvalidArgument,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace jacobi
