#pragma once

#include <stdexcept>
#include <string>

namespace dop {

// Base of every library error. CLI maps subclasses onto exit codes.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed polynomial, rational or JSON text.
class parse_error : public error {
 public:
  using error::error;
};

// Operands of incompatible dimension or shape.
class dimension_error : public error {
 public:
  using error::error;
};

// Parameter outside its validity range, unknown model, bad configuration.
class parameter_error : public error {
 public:
  using error::error;
};

// Measure whose log-gradient is not a polynomial of degree <= 1.
class inadmissible_measure : public error {
 public:
  using error::error;
};

// A numeric routine could not proceed (e.g. Cholesky of a non-SPD Gram).
class numeric_error : public error {
 public:
  using error::error;
};

// Structural invariant of the framework violated by the input operator.
class inconsistency_error : public error {
 public:
  using error::error;
};

}  // namespace dop
