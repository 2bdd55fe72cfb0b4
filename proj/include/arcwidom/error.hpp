#pragma once

#include <stdexcept>
#include <string>

namespace arcwidom {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inadmissible input (arc spec, weight spec, option values).
class InputError : public Error {
 public:
  using Error::Error;
};

/// The geometry is valid but outside what the map construction supports
/// (for example a lifted curve that is not star-shaped).
class UnsupportedGeometry : public Error {
 public:
  using Error::Error;
};

/// An iteration did not reach its tolerance within its cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A point was too close to the arc, or to an endpoint, for the requested
/// evaluation.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace arcwidom
