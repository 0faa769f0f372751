#pragma once

#include <stdexcept>
#include <string>

namespace qamp {

/// Precondition violated by an argument (negative time, bad rate, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Base for failures of the numerical machinery itself; the CLI maps these
/// to exit code 3.
class numeric_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class quadrature_error : public numeric_failure {
 public:
  using numeric_failure::numeric_failure;
};

/// Fock-space truncation too small for the requested horizon, or RK4 step
/// too coarse (trace drift).
class truncation_error : public numeric_failure {
 public:
  using numeric_failure::numeric_failure;
};

/// A requested phase-space grid does not cover the distribution.
class grid_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The P function is not a proper Gaussian kernel at this time.
class ill_defined_p_error : public domain_error {
 public:
  using domain_error::domain_error;
};

}  // namespace qamp
