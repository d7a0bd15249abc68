#pragma once

#include <stdexcept>
#include <string>

namespace twk {

// Failure kinds surfaced by library preconditions. Check-style operations
// (check_structure, dd_check, ...) return reports instead of throwing.
enum class ErrorKind {
    IllFormedPresentation,
    IllFormedRelation,
    NotFiniteAtBound,
    DimensionMismatch,
    EndpointMismatch,
    ForeignBasisElement,
    WrongAlgebra,
    CoefficientRelationViolated,
    InvalidStructure,
    NonClosedMorphism,
    NonTerminatingBoxTensor,
    ConeIdentificationFailed,
    HomotopyIdentityFailed,
    ParseError,
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace twk
