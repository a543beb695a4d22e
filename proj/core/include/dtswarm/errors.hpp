#pragma once

#include <stdexcept>
#include <string>

namespace dtswarm {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or scenario contents. The CLI maps this to exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed arguments to a pure operation (e.g. relative_state(i, i)).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Membrane potentials left the finite / guarded range.
class NumericalDivergence : public Error {
 public:
  using Error::Error;
};

/// Waypoint deflection did not clear the obstacle within max_iters passes.
class AvoidanceFailure : public Error {
 public:
  using Error::Error;
};

/// Run artifacts on disk are missing or inconsistent.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

}  // namespace dtswarm
