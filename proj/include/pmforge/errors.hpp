#pragma once

#include <stdexcept>
#include <string>

namespace pmforge {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Incompatible matrix or module shapes.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A pair of grades that is not ordered as the operation requires.
class OrderError : public Error {
public:
    using Error::Error;
};

/// Operands defined over different fields or ambient dimensions.
class MismatchError : public Error {
public:
    using Error::Error;
};

/// Rational arithmetic left the range of 64-bit numerators/denominators.
class ArithmeticOverflow : public Error {
public:
    using Error::Error;
};

/// A graded family that fails to commute with the structure maps.
class HomomorphismError : public Error {
public:
    using Error::Error;
};

/// Preconditions of a construction are not met, or an internal check failed.
class ConstructionError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace pmforge
