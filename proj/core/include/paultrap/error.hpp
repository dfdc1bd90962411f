#pragma once

#include <stdexcept>
#include <string>

namespace paultrap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a type invariant (nonpositive radius, negative temperature, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// An operation was called with a drive of the wrong topology.
class TopologyMismatch : public Error {
 public:
  using Error::Error;
};

/// Inputs are valid but the requested quantity does not exist for them
/// (unstable drive, vanishing acceleration, singular polarizability, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace paultrap
