#pragma once

#include <cmath>
#include <vector>

#include "motility/errors.hpp"
#include "motility/grid1d.hpp"
#include "motility/potential.hpp"

namespace motility {

/// Tabulated heteroclinic standing-wave profile theta0 of
///
///   theta0'' = W'(theta0),   theta0(-inf) = 0,  theta0(+inf) = 1,
///
/// normalized by theta0(0) = 1/2.  For the quartic well this is the
/// increasing branch theta0(y) = (1 + tanh(y / sqrt(8))) / 2, equivalently
/// the logistic function of y / sqrt(2).  The table stores the profile, its
/// first derivative through the equipartition identity
/// theta0' = sqrt(2 W(theta0)) = theta0 (1 - theta0) / sqrt(2) (exact for the
/// increasing branch and free of cancellation in the tails), and the second
/// derivative through the defining ODE.
///
/// Two derived constants are housed here:
///   c0          = int (theta0')^2 dy   (= sqrt(2)/12 for this potential)
///   total_rise  = int theta0' dy       (= 1)
/// plus an exponential envelope (theta0')^2 ~ e^{-kappa_env |y|} fitted by
/// least squares, with c_env chosen so that
///   c_env^{-1} e^{-kappa_env |y|} < (theta0')^2 <= c_env e^{-kappa_env |y|}
/// holds at every node.
///
/// Note on c0: direct quadrature and the identity int_0^1 sqrt(2 W) d(theta)
/// agree on sqrt(2)/12 = 0.117851...  A value of sqrt(3/2) is sometimes
/// quoted for this constant; it corresponds to a different normalization of
/// the potential and is not used here.
struct ProfileTable {
  SymmetricGrid grid;
  std::vector<double> theta0;
  std::vector<double> dtheta0;
  std::vector<double> d2theta0;
  double c0 = 0.0;
  double total_rise = 0.0;
  double kappa_env = 0.0;
  double c_env = 0.0;

  std::size_t size() const { return theta0.size(); }

  /// Closed form of the profile, stable in both tails.
  static double theta0_at(double y) {
    const double z = y / std::sqrt(2.0);
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
  }

  /// Closed form of the derivative via equipartition.
  static double dtheta0_at(double y) {
    const double t = theta0_at(y);
    const double u = theta0_at(-y);  // = 1 - t without cancellation
    return t * u / std::sqrt(2.0);
  }

  LineField theta0_field() const { return as_field(theta0); }
  LineField dtheta0_field() const { return as_field(dtheta0); }

  /// (theta0')^2, the weight of all solvability integrals.
  LineField weight_field() const {
    LineField w(grid);
    for (std::size_t j = 0; j < size(); ++j) w.v[j] = dtheta0[j] * dtheta0[j];
    return w;
  }

  /// max_j |D2 theta0 - W'(theta0)| over interior nodes, with D2 the centred
  /// second difference applied to the tabulated values.
  double max_ode_residual() const {
    const double ih2 = 1.0 / (grid.h * grid.h);
    double r = 0.0;
    for (std::size_t j = 1; j + 1 < size(); ++j) {
      const double d2 = (theta0[j - 1] - 2.0 * theta0[j] + theta0[j + 1]) * ih2;
      r = std::max(r, std::abs(d2 - DoubleWell::dw(theta0[j])));
    }
    return r;
  }

 private:
  LineField as_field(const std::vector<double>& src) const {
    LineField f(grid);
    f.v = src;
    return f;
  }
};

/// Build the profile table on [-L, L] with spacing h.
/// Requires L >= 40 (so that (theta0')^2 < 1e-24 at the ends and Dirichlet
/// truncation is harmless) and h <= 0.1.
inline ProfileTable build_profile(double L, double h) {
  if (!(L >= 40.0))
    throw ConfigError("build_profile: need L >= 40, got " + std::to_string(L));
  if (!(h > 0.0 && h <= 0.1))
    throw ConfigError("build_profile: need 0 < h <= 0.1, got " + std::to_string(h));

  ProfileTable p;
  p.grid = SymmetricGrid::with_half_width(L, h);
  const std::size_t n = p.grid.size();
  p.theta0.resize(n);
  p.dtheta0.resize(n);
  p.d2theta0.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = p.grid.y(j);
    p.theta0[j] = ProfileTable::theta0_at(y);
    p.dtheta0[j] = ProfileTable::dtheta0_at(y);
    p.d2theta0[j] = DoubleWell::dw(p.theta0[j]);
  }
  p.theta0[p.grid.index_of_zero()] = 0.5;  // exact normalization

  p.c0 = trapz(p.weight_field());
  p.total_rise = trapz(p.dtheta0_field());

  // Envelope fit: least squares of log (theta0')^2 against |y| on |y| <= L/2,
  // then inflate c_env until both envelope bounds hold at every node.
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long cnt = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double y = std::abs(p.grid.y(j));
      if (y > 0.5 * p.grid.half_width()) continue;
      const double ly = std::log(p.dtheta0[j] * p.dtheta0[j]);
      sx += y; sy += ly; sxx += y * y; sxy += y * ly;
      ++cnt;
    }
    const double denom = cnt * sxx - sx * sx;
    p.kappa_env = -(cnt * sxy - sx * sy) / denom;
    double cmax = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = p.dtheta0[j] * p.dtheta0[j];
      const double env = std::exp(-p.kappa_env * std::abs(p.grid.y(j)));
      cmax = std::max(cmax, std::max(w / env, env / w));
    }
    p.c_env = cmax * (1.0 + 1e-9);
  }
  return p;
}

/// Friedrichs constant c_F = c_env^4 / kappa_env^2 implied by the envelope.
inline double friedrichs_constant(const ProfileTable& p) {
  return std::pow(p.c_env, 4) / (p.kappa_env * p.kappa_env);
}

}  // namespace motility
