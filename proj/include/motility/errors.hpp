#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace motility {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration: out-of-range parameters, violated stability or
/// resolution budgets, malformed run configs.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Two fields that must share a grid do not.
class GridMismatchError : public Error {
 public:
  explicit GridMismatchError(const std::string& msg) : Error(msg) {}
};

/// Right-hand side not orthogonal to the kernel of the linearized operator.
/// Carries the offending inner product.
class SolvabilityError : public Error {
 public:
  SolvabilityError(const std::string& msg, double inner_product)
      : Error(msg + " (inner product = " + std::to_string(inner_product) + ")"),
        inner_product(inner_product) {}
  double inner_product;
};

/// No root found inside the search bracket.
class RootError : public Error {
 public:
  explicit RootError(const std::string& msg) : Error(msg) {}
};

/// More than one root found where a unique one was required.  Carries all
/// roots located by the scan.
class MultiplicityError : public Error {
 public:
  MultiplicityError(const std::string& msg, std::vector<double> roots_in)
      : Error(msg), roots(std::move(roots_in)) {}
  std::vector<double> roots;
};

/// Fixed-point or iterative solve failed to converge.  Carries the final
/// residual.
class IterationError : public Error {
 public:
  IterationError(const std::string& msg, double residual)
      : Error(msg + " (final residual = " + std::to_string(residual) + ")"),
        residual(residual) {}
  double residual;
};

/// Curve or level set has the wrong topology (component count, crossing).
class TopologyError : public Error {
 public:
  TopologyError(const std::string& msg, long detail = -1)
      : Error(msg), detail(detail) {}
  long detail;
};

/// NaN or runaway values detected during time stepping.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& msg, long step_index)
      : Error(msg + " (step " + std::to_string(step_index) + ")"),
        step_index(step_index) {}
  long step_index;
};

/// The state no longer contains an extractable front.
class FrontLostError : public Error {
 public:
  explicit FrontLostError(const std::string& msg) : Error(msg) {}
};

/// Grid too coarse for the requested measurement.
class ResolutionError : public Error {
 public:
  explicit ResolutionError(const std::string& msg) : Error(msg) {}
};

}  // namespace motility
