#pragma once

#include <cmath>
#include <string>

#include "motility/grid1d.hpp"
#include "motility/potential.hpp"
#include "motility/profile.hpp"
#include "motility/tridiag.hpp"

namespace motility {

/// Apply the linearized operator  L u = -u'' + W''(theta0) u  with centred
/// second differences and homogeneous Dirichlet closure at the two ends.
/// theta0' spans the (numerical) kernel of L.
inline LineField linearized_ac_apply(const LineField& u, const ProfileTable& p) {
  require_same_grid(u.grid, p.grid, "linearized_ac_apply");
  LineField out = second_derivative_dirichlet(u);
  for (std::size_t j = 0; j < u.size(); ++j)
    out.v[j] = -out.v[j] + DoubleWell::d2w(p.theta0[j]) * u.v[j];
  return out;
}

namespace detail {

inline TridiagLU linearized_ac_lu(const ProfileTable& p) {
  const std::size_t n = p.size();
  const double ih2 = 1.0 / (p.grid.h * p.grid.h);
  std::vector<double> lo(n, -ih2), up(n, -ih2), di(n);
  for (std::size_t j = 0; j < n; ++j)
    di[j] = 2.0 * ih2 + DoubleWell::d2w(p.theta0[j]);
  lo[0] = 0.0;
  up[n - 1] = 0.0;
  return TridiagLU(std::move(lo), di, std::move(up));
}

}  // namespace detail

/// Solve  L u = f  subject to <u, theta0'> = 0.
///
/// L is singular up to discretization (theta0' is its kernel), so the system
/// is solved in bordered form
///
///   [ L   w ] [u ]   [f]
///   [ w^T 0 ] [mu] = [0],       w = theta0',
///
/// which requires <f, theta0'> = 0 within `tol`.  The Schur reduction uses
/// two tridiagonal solves; the kernel components of both blow up by the same
/// 1/lambda_min factor and cancel in the projection, and one step of
/// iterative refinement removes what is left of that cancellation.
inline LineField linearized_ac_solve(const LineField& f, const ProfileTable& p,
                                     double tol = 1e-8) {
  require_same_grid(f.grid, p.grid, "linearized_ac_solve");
  const LineField w = p.dtheta0_field();
  const double fw = inner(f, w);
  if (std::abs(fw) > tol)
    throw SolvabilityError("linearized_ac_solve: right-hand side not orthogonal to theta0'", fw);

  const TridiagLU lu = detail::linearized_ac_lu(p);
  const std::vector<double> x2 = lu.solve(w.v);
  LineField x2f(f.grid);
  x2f.v = x2;
  const double x2w = inner(x2f, w);
  if (std::abs(x2w) < 1e-300)
    throw Error("linearized_ac_solve: degenerate bordered system");

  LineField u(f.grid);
  {
    LineField x1(f.grid);
    x1.v = lu.solve(f.v);
    const double mu = inner(x1, w) / x2w;
    for (std::size_t j = 0; j < u.size(); ++j) u.v[j] = x1.v[j] - mu * x2f.v[j];

    // one refinement pass against the assembled operator
    LineField r = linearized_ac_apply(u, p);
    for (std::size_t j = 0; j < u.size(); ++j) r.v[j] = f.v[j] - r.v[j];
    LineField d1(f.grid);
    d1.v = lu.solve(r.v);
    const double dmu = inner(d1, w) / x2w;
    for (std::size_t j = 0; j < u.size(); ++j) u.v[j] += d1.v[j] - dmu * x2f.v[j];
  }
  return u;
}

}  // namespace motility
