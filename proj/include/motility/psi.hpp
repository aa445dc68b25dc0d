#pragma once

#include <cmath>

#include "motility/grid1d.hpp"
#include "motility/profile.hpp"
#include "motility/tridiag.hpp"

namespace motility {

/// Orientation profile: solution of the advected screened equation
///   Psi'' - V Psi' - Psi = -beta theta0'
/// on the profile grid with Dirichlet 0 at both ends.
struct PsiProfile {
  SymmetricGrid grid;
  std::vector<double> values;
  double V = 0.0;
  double beta = 0.0;

  LineField field() const {
    LineField f(grid);
    f.v = values;
    return f;
  }
};

namespace detail {

/// Solve  Psi'' - V Psi' - Psi = g  with Dirichlet 0 ends.  The negated rows
///   (-1/h^2 - V/2h) psi_{j-1} + (2/h^2 + 1) psi_j + (-1/h^2 + V/2h) psi_{j+1}
/// are strictly diagonally dominant whenever |V| h < 2.
inline LineField solve_advected(double V, const LineField& g,
                                const ProfileTable& p) {
  require_same_grid(g.grid, p.grid, "solve_advected");
  const std::size_t n = g.size();
  const double h = p.grid.h;
  const double ih2 = 1.0 / (h * h);
  const double adv = V / (2.0 * h);
  std::vector<double> lo(n, -ih2 - adv), di(n, 2.0 * ih2 + 1.0),
      up(n, -ih2 + adv), rhs(n);
  lo[0] = 0.0;
  up[n - 1] = 0.0;
  for (std::size_t j = 0; j < n; ++j) rhs[j] = -g.v[j];
  LineField out(g.grid);
  out.v = solve_tridiagonal(lo, di, up, rhs);
  return out;
}

}  // namespace detail

/// Solve the leading-order orientation equation for given advection speed V
/// and coupling strength beta.  Exactly linear in beta.
inline PsiProfile solve_psi0(double V, double beta, const ProfileTable& p) {
  if (!(std::abs(V) <= 5.0))
    throw ConfigError("solve_psi0: |V| <= 5 required, got " + std::to_string(V));
  LineField rhs(p.grid);
  for (std::size_t j = 0; j < p.size(); ++j) rhs.v[j] = -beta * p.dtheta0[j];
  PsiProfile psi;
  psi.grid = p.grid;
  psi.V = V;
  psi.beta = beta;
  psi.values = detail::solve_advected(V, rhs, p).v;
  return psi;
}

}  // namespace motility
