#pragma once

#include <stdexcept>
#include <string>

namespace projgeom {

// Base class for every failure raised by this library. Callers that only
// want to distinguish "bad math input" from "bug" can catch the two
// intermediate classes below instead of the leaf types.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A mathematical precondition was violated by otherwise well-formed input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// An internal invariant failed; indicates a numerical breakdown or a bug.
class InvariantError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// f is undefined (non-finite) at a point where it is being evaluated.
class DomainError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NotPsdError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class SingularError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// ||P - Q|| is too close to 1: the second range is not a graph over the first.
class NotAGraphError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// A hypothesis of the statement being evaluated fails (full-range condition,
// graph condition along a path, disjointness of spectral sets, ...).
class HypothesisError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// No spectral gap of the requested size exists.
class NoGapError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Component tracking lost a spectral cluster along the path.
class GapClosedError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// An iteration failed to converge within its cap.
class ConvergenceError : public InvariantError {
 public:
  using InvariantError::InvariantError;
};

// A projection pair fails consistency checks that valid inputs cannot fail.
class InconsistentPairError : public InvariantError {
 public:
  using InvariantError::InvariantError;
};

}  // namespace projgeom
