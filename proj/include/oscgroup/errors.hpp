#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oscgroup {

// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed expression source. `offset` is the byte position at which
// parsing failed; the message names the expected token.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at offset " + std::to_string(offset) + ")"),
          offset(offset) {}
    std::size_t offset;
};

// Evaluation outside the mathematical domain: division by zero, sqrt of a
// negative number, a vanishing coefficient, a violated precondition.
class DomainError : public Error {
public:
    using Error::Error;
};

// Adaptive quadrature failed to reach the requested tolerance within its
// subdivision budget, or an integrand denominator vanishes in the range.
class QuadratureError : public Error {
public:
    using Error::Error;
};

// Step-size underflow or budget exhaustion in the ODE integrator.
class IntegrationError : public Error {
public:
    using Error::Error;
};

// Evaluation at a caustic or another singular time (vanishing mu or a
// vanishing kernel denominator).  Never continued through silently.
class SingularTime : public Error {
public:
    using Error::Error;
};

// Composition of transforms whose source/target equations do not chain.
class ContextMismatch : public Error {
public:
    using Error::Error;
};

// Requested inverse does not exist on the element's validity interval.
class NotInvertible : public Error {
public:
    using Error::Error;
};

// Sample block too small for the finite-difference stencils.
class GridTooCoarse : public Error {
public:
    using Error::Error;
};

}  // namespace oscgroup
