#pragma once

#include <cmath>

#include "motility/grid1d.hpp"
#include "motility/profile.hpp"

namespace motility {

/// One measured inequality: LHS <= constant * RHS, reported as the pair and
/// their ratio (the measured constant).  A vanishing LHS reports ratio 0.
struct InequalityEntry {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// Measured constants for the four weighted inequalities with weight
/// w = (theta0')^2:
///
///   poincare :  int w (v - <v>)^2       <= c_P int w (v')^2,
///               <v> = int w v / int w
///   friedrichs: int w u^2               <= c_F int w (u')^2,  u = v - v(0)
///   interp3  :  int |theta0'|^3 |v|^3   <= c_I (int w (v^2 + v'^2))^{1/2} int w v^2
///   interp4  :  int w^2 v^4             <= c_4 (int w (v^2 + v'^2))^{1/2} (int w v^2)^{3/2}
///
/// The envelope bound gives c_F <= c_env^4 / kappa_env^2; the others exist
/// with constants depending only on the envelope.  Derivatives are centred
/// differences; integrals trapezoidal.
struct InequalityReport {
  InequalityEntry poincare;
  InequalityEntry friedrichs;
  InequalityEntry interp3;
  InequalityEntry interp4;
};

inline InequalityReport check_weighted_inequalities(const LineField& v,
                                                    const ProfileTable& p) {
  require_same_grid(v.grid, p.grid, "check_weighted_inequalities");
  const std::size_t n = v.size();
  const LineField w = p.weight_field();
  const LineField dv = derivative(v);

  auto wint = [&](auto&& fn) {
    LineField f(v.grid);
    for (std::size_t j = 0; j < n; ++j) f.v[j] = fn(j);
    return trapz(f);
  };

  const double wmass = trapz(w);
  const double wv = wint([&](std::size_t j) { return w.v[j] * v.v[j]; });
  const double vbar = wv / wmass;
  const double grad = wint([&](std::size_t j) { return w.v[j] * dv.v[j] * dv.v[j]; });
  const double wv2 = wint([&](std::size_t j) { return w.v[j] * v.v[j] * v.v[j]; });
  const double mixed = wint([&](std::size_t j) {
    return w.v[j] * (v.v[j] * v.v[j] + dv.v[j] * dv.v[j]);
  });

  auto make = [](double lhs, double rhs) {
    InequalityEntry e;
    e.lhs = lhs;
    e.rhs = rhs;
    // a LHS at rounding level counts as zero (constant inputs make both
    // sides vanish exactly up to roundoff)
    e.ratio = (std::abs(lhs) <= 1e-14 * std::max(1.0, rhs)) ? 0.0 : lhs / rhs;
    return e;
  };

  InequalityReport rep;
  rep.poincare = make(
      wint([&](std::size_t j) {
        const double d = v.v[j] - vbar;
        return w.v[j] * d * d;
      }),
      grad);

  const double v0 = v.v[v.grid.index_of_zero()];
  rep.friedrichs = make(
      wint([&](std::size_t j) {
        const double u = v.v[j] - v0;
        return w.v[j] * u * u;
      }),
      grad);

  rep.interp3 = make(
      wint([&](std::size_t j) {
        const double a = std::abs(p.dtheta0[j]), b = std::abs(v.v[j]);
        return a * a * a * b * b * b;
      }),
      std::sqrt(mixed) * wv2);

  rep.interp4 = make(
      wint([&](std::size_t j) {
        const double vv = v.v[j] * v.v[j];
        return w.v[j] * w.v[j] * vv * vv;
      }),
      std::sqrt(mixed) * wv2 * std::sqrt(wv2));

  return rep;
}

}  // namespace motility
