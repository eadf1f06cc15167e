#pragma once

#include <stdexcept>
#include <string>

namespace cbound {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (point outside V, empty grid, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A scenario file or command-line override is malformed or out of range.
class ConfigError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// A query was made outside the domain on which an object is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A structural contract between arguments does not hold, e.g. cones not nested.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// The ODE integrator could not make progress.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double s, double r)
        : Error(what), s_(s), r_(r) {}

    double s() const noexcept { return s_; }
    double r() const noexcept { return r_; }

private:
    double s_;
    double r_;
};

} // namespace cbound
