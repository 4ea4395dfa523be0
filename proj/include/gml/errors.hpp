#pragma once

#include <stdexcept>
#include <string>

namespace gml {

// Invalid arguments and violated preconditions. The CLI maps these to exit 2.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Base class for failures of the numerics themselves. The CLI maps these to
// exit 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A quadrature ran out of budget. Carries the best estimate reached and its
// error bound so callers can decide whether it is usable anyway.
class NonConvergenceError : public NumericalError {
 public:
  NonConvergenceError(const std::string& what, double best_estimate,
                      double error_bound)
      : NumericalError(what),
        best_estimate_(best_estimate),
        error_bound_(error_bound) {}

  double best_estimate() const { return best_estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

class DivergentIntegralError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Inputs for which e^{|alpha| x} (or a kernel exponent) would leave the
// double range.
class OverflowGuardError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace gml
