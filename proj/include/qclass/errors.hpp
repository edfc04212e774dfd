#pragma once

#include <stdexcept>
#include <string>

namespace qclass {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A Bloch vector outside the ball, or a matrix that is not a valid state.
class InvalidStateError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The Helstrom projector is not unique (equal priors and identical states).
class DegenerateProblemError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// A training set without copies of one of the two states.
class DegenerateTrainingSetError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// Failure of an internal numerical consistency check.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace qclass
