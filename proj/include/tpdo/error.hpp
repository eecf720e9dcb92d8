#pragma once

#include <stdexcept>
#include <string>

namespace tpdo {

enum class ErrorKind {
  invalid_argument,
  size_mismatch,
  grid_mismatch,
  differentiation_cap,
  syntax,
  domain,
  aliasing,
  cutoff,
  non_convergence,
  singular,
  io,
  config,
};

const char* to_string(ErrorKind kind);

/// Library-wide exception. Every failure raised by tpdo carries a kind so
/// callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Iterative method ran out of iterations; keeps the last estimate.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double best_estimate, double residual)
      : Error(ErrorKind::non_convergence, what),
        best_estimate_(best_estimate),
        residual_(residual) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double residual() const noexcept { return residual_; }

 private:
  double best_estimate_;
  double residual_;
};

}  // namespace tpdo
