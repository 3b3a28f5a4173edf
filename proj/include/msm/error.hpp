#pragma once

#include <stdexcept>
#include <string>

namespace msm {

// Precondition violated by a caller-supplied argument.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A series hit its term budget before the stopping rule fired.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive quadrature could not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The model is outside the region where an observable is finite
// (for instance 1 + B(0) <= 0).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Too few windows or samples to form an estimate.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

[[noreturn]] inline void domain_fail(const std::string& where, const std::string& what) {
  throw DomainError(where + ": " + what);
}

}  // namespace detail
}  // namespace msm
