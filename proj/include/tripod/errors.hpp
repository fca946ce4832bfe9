#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace tripod {

// Quadrature or other numeric routine failed to reach the requested accuracy.
// `achieved` is the error estimate at the point of giving up.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

// Newton solver ran out of iterations. Carries the last iterate (R^3
// coordinates) and its residual so callers can report diagnostics.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::array<double, 3> last_iterate,
              double residual)
      : std::runtime_error(what), last_(last_iterate), residual_(residual) {}
  const std::array<double, 3>& last_iterate() const { return last_; }
  double residual() const { return residual_; }

 private:
  std::array<double, 3> last_;
  double residual_;
};

}  // namespace tripod
