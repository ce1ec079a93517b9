#pragma once

#include <stdexcept>
#include <string>

namespace starkbus {

/// Base class for every domain error raised by the library. The CLI maps
/// these to exit code 1 and prints what() verbatim.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// An eigenstate could not be tied to a unique bare state (overlap < 0.5).
class AmbiguousLabel : public Error {
public:
  using Error::Error;
};

class NoAntiCrossing : public Error {
public:
  using Error::Error;
};

/// Perturbative expression evaluated on one of its poles.
class PoleAtDetuning : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public Error {
public:
  using Error::Error;
};

class CalibrationError : public Error {
public:
  using Error::Error;
};

class EmptyPlan : public Error {
public:
  using Error::Error;
};

class UnknownScenario : public Error {
public:
  using Error::Error;
};

} // namespace starkbus
