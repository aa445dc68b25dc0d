#pragma once

#include "motility/errors.hpp"

namespace motility {

/// The fixed double equal-well potential
///
///   W(rho) = (1/4) rho^2 (1 - rho)^2,
///
/// with wells at rho = 0 and rho = 1 and a local maximum at rho = 1/2.
/// The factored derivative is W'(rho) = (1/2) rho (1 - rho)(1 - 2 rho).
/// Useful facts: W >= 0 everywhere, W''(0) = W''(1) = 1/2, W'''' = 6,
/// and (W')^2 <= 6 W on [0, 1].
struct DoubleWell {
  static double w(double r) {
    const double s = r * (1.0 - r);
    return 0.25 * s * s;
  }
  static double dw(double r) { return 0.5 * r * (1.0 - r) * (1.0 - 2.0 * r); }
  static double d2w(double r) { return 0.5 - 3.0 * r + 3.0 * r * r; }
  static double d3w(double r) { return 6.0 * r - 3.0; }
  static double d4w(double) { return 6.0; }
};

/// Evaluate W or one of its first four derivatives.
/// order: 0 -> W, 1 -> W', 2 -> W'', 3 -> W''', 4 -> W''''.
inline double potential_eval(double rho, int order) {
  switch (order) {
    case 0: return DoubleWell::w(rho);
    case 1: return DoubleWell::dw(rho);
    case 2: return DoubleWell::d2w(rho);
    case 3: return DoubleWell::d3w(rho);
    case 4: return DoubleWell::d4w(rho);
    default:
      throw DomainError("potential_eval: derivative order must be 0..4, got " +
                        std::to_string(order));
  }
}

}  // namespace motility
