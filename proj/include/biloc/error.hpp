#pragma once

#include <stdexcept>
#include <string>

namespace biloc {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or configuration value.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed input file (instance JSON, LP text, solution JSON).
class ParseError : public Error {
 public:
  using Error::Error;
};

// An index or (service, price) pair that does not exist in the instance.
class IndexError : public Error {
 public:
  using Error::Error;
};

// The MILP builder could not assemble a model from its inputs.
class BuildError : public Error {
 public:
  using Error::Error;
};

// Numerical failure inside an LP or MILP solve.
class SolverError : public Error {
 public:
  using Error::Error;
};

// A solution violates the constraints it was checked against.
class FeasibilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace biloc
