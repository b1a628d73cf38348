#pragma once

#include <stdexcept>
#include <string>

namespace equispec {

/// Bad input: malformed mesh, out-of-range parameter, inconsistent group.
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigensolver exhausted its iteration budget. Carries the worst residual.
class NotConverged : public std::runtime_error {
 public:
  NotConverged(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// The computed spectrum does not reach far enough to decide a count.
class InsufficientSpectrum : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace equispec
