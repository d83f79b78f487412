#pragma once

#include <stdexcept>
#include <string>

namespace capprox {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class NotConvex : public Error {
public:
  using Error::Error;
};

class EmptyPolyhedron : public Error {
public:
  using Error::Error;
};

class DimensionGuardExceeded : public Error {
public:
  using Error::Error;
};

class UnboundedInput : public Error {
public:
  using Error::Error;
};

/// The constraint system has no strictly feasible point.
class FailedPhaseOne : public Error {
public:
  using Error::Error;
};

class NumericalFailure : public Error {
public:
  using Error::Error;
};

/// A Pascoletti-Serafini problem was posed with a point outside the image.
class InfeasibleScalarization : public Error {
public:
  using Error::Error;
};

/// The bounded driver met a weighted sum that is unbounded.
class UnboundedProblem : public Error {
public:
  using Error::Error;
};

class IterationLimit : public Error {
public:
  using Error::Error;
};

}  // namespace capprox
