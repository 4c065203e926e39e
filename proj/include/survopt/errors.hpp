#pragma once

#include <stdexcept>
#include <string>

namespace survopt {

/// Base class for all survopt-specific errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The requested moment does not exist (e.g. Lomax with shape <= 1).
class InfiniteMeanError : public Error {
  public:
    using Error::Error;
};

/// The absorbing state cannot be reached from some transient state,
/// or a transient state has no outgoing transitions in the data.
class UnreachableStateError : public Error {
  public:
    using Error::Error;
};

/// Both samples of a two-sample test have zero variance.
class ZeroVarianceError : public Error {
  public:
    using Error::Error;
};

/// A group ended up with too few observations to analyze.
class InsufficientSampleError : public Error {
  public:
    using Error::Error;
};

/// An episode's record sequence does not terminate in the absorbing state.
class IncompleteEpisodeError : public Error {
  public:
    using Error::Error;
};

/// A CSV input is missing required columns or is otherwise unusable.
class SchemaError : public Error {
  public:
    using Error::Error;
};

/// A scenario configuration file contains unknown keys or invalid values.
class ConfigError : public Error {
  public:
    using Error::Error;
};

}  // namespace survopt
