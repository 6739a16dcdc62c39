#pragma once

#include <stdexcept>
#include <string>

namespace glvortex {

/// Raised when an iterative method (Newton, Lanczos, factorization) fails.
/// Carries the best residual reached so callers can report it.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual = -1.0, int iterations = -1)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

}  // namespace glvortex
