#pragma once

#include <stdexcept>
#include <string>

namespace svjd {

/// Input violates a model invariant or an operation precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical evaluation left its domain of validity (CF strip, branch cut,
/// non-finite intermediate).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative procedure failed to converge or bracket a root.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace svjd
