#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "motility/expansion.hpp"
#include "motility/front_curve.hpp"
#include "motility/phi.hpp"

namespace motility {

/// 1D sharp-interface trajectory: front position, velocity and root
/// multiplicity per time node.
struct FrontTrajectory1D {
  std::vector<double> t;
  std::vector<double> x0;
  std::vector<double> v;
  std::vector<int> branch_flags;
};

struct VelocityRoot {
  double V = 0.0;
  int multiplicity = 0;
};

/// Roots of the 1D interface law
///
///   c0 xdot + beta Phi(xdot) + F = 0
///
/// on [-5, 5].  All sign changes of the tabulated residual (scanned at 1e-3)
/// are polished against the exact quadrature to residual <= 1e-12; the root
/// nearest `warm_start` is returned together with the root count, so a
/// continuation loop can track its branch when several roots coexist.
inline VelocityRoot solve_velocity_1d(double F_value, double beta,
                                      const PhiTable& phi,
                                      std::optional<double> warm_start = {}) {
  const double c0 = phi.c0();
  auto q_scan = [&](double v) { return c0 * v + beta * phi(v) + F_value; };
  auto q_exact = [&](double v) { return c0 * v + beta * phi.exact(v) + F_value; };
  auto q_slope = [&](double v) { return c0 + beta * phi.slope(v); };

  const double vmax = phi.v_max();
  const long nsteps = std::lround(2.0 * vmax / 1e-3);
  std::vector<std::pair<double, double>> brackets;
  double vprev = -vmax, qprev = q_scan(vprev);
  for (long s = 1; s <= nsteps; ++s) {
    const double v = -vmax + 2.0 * vmax * static_cast<double>(s) / nsteps;
    const double qv = q_scan(v);
    if (qprev == 0.0 || qprev * qv < 0.0) brackets.emplace_back(vprev, v);
    vprev = v;
    qprev = qv;
  }
  if (brackets.empty())
    throw RootError("solve_velocity_1d: no root of the interface law in [-5, 5]");

  std::vector<double> roots;
  for (auto [a, b] : brackets) {
    double qa = q_scan(a);
    for (int it = 0; it < 60 && b - a > 1e-11; ++it) {
      const double m = 0.5 * (a + b);
      const double qm = q_scan(m);
      if (qa * qm <= 0.0) b = m; else { a = m; qa = qm; }
    }
    double v = 0.5 * (a + b);
    double qv = q_exact(v);
    for (int it = 0; it < 8 && std::abs(qv) > 1e-13; ++it) {
      v = std::clamp(v - qv / q_slope(v), -vmax, vmax);
      qv = q_exact(v);
    }
    if (std::abs(qv) > 1e-10)
      throw RootError("solve_velocity_1d: polish failed, residual " +
                      std::to_string(qv));
    roots.push_back(v);
  }

  const double target = warm_start.value_or(0.0);
  VelocityRoot out;
  out.multiplicity = static_cast<int>(roots.size());
  out.V = roots.front();
  for (double r : roots)
    if (std::abs(r - target) < std::abs(out.V - target)) out.V = r;
  return out;
}

/// Integrate xdot = V(t) with the explicit midpoint rule, warm-starting each
/// root solve from the previous velocity (branch continuation).
inline FrontTrajectory1D integrate_front_1d(const TimeSeries& F, double beta,
                                            double x_init, double t0, double t1,
                                            double dt, const PhiTable& phi) {
  if (!(dt > 0.0) || dt > 1e-2 * (t1 - t0))
    throw ConfigError("integrate_front_1d: need 0 < dt <= (t1 - t0)/100");
  const long nsteps = std::lround((t1 - t0) / dt);
  FrontTrajectory1D traj;
  traj.t.reserve(nsteps + 1);
  traj.x0.reserve(nsteps + 1);
  traj.v.reserve(nsteps + 1);
  traj.branch_flags.reserve(nsteps + 1);

  double x = x_init;
  std::optional<double> warm;
  for (long k = 0; k <= nsteps; ++k) {
    const double t = t0 + (t1 - t0) * static_cast<double>(k) / nsteps;
    VelocityRoot node;
    try {
      node = solve_velocity_1d(F(t), beta, phi, warm);
    } catch (const RootError& e) {
      throw RootError(std::string(e.what()) + " at t = " + std::to_string(t));
    }
    traj.t.push_back(t);
    traj.x0.push_back(x);
    traj.v.push_back(node.V);
    traj.branch_flags.push_back(node.multiplicity);
    warm = node.V;
    if (k < nsteps) {
      VelocityRoot mid;
      try {
        mid = solve_velocity_1d(F(t + 0.5 * dt), beta, phi, warm);
      } catch (const RootError& e) {
        throw RootError(std::string(e.what()) + " at t = " +
                        std::to_string(t + 0.5 * dt));
      }
      x += dt * mid.V;
      warm = mid.V;
    }
  }
  return traj;
}

/// Per-node normal velocity of the closed curve under the nonlocal law
///
///   V = kappa + (beta/c0) Phi(V) - mean_curve[kappa + (beta/c0) Phi(V)],
///
/// where the mean is arclength weighted; its subtract-the-mean structure
/// makes every converged field average to zero, which is what preserves the
/// enclosed area.  Solved by damped fixed-point iteration (damping 1/2) to
/// residual 1e-10; beta = 0 needs a single undamped application.
inline std::vector<double> solve_velocity_field_2d(const FrontCurve& curve,
                                                   double beta,
                                                   const PhiTable& phi) {
  if (!curve.has_geometry())
    throw ConfigError("solve_velocity_field_2d: curvature not populated");
  if (!(std::abs(beta) <= 0.5))
    throw ConfigError("solve_velocity_field_2d: |beta| <= 0.5 required");

  const std::size_t n = curve.size();
  std::vector<double> wts(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = norm(curve.nodes[i] - curve.nodes[(i + n - 1) % n]);
    const double next = norm(curve.nodes[(i + 1) % n] - curve.nodes[i]);
    wts[i] = 0.5 * (prev + next);
    total += wts[i];
  }
  auto curve_mean = [&](const std::vector<double>& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += wts[i] * f[i];
    return s / total;
  };

  if (beta == 0.0) {
    std::vector<double> V = curve.kappa;
    const double mean = curve_mean(V);
    for (double& v : V) v -= mean;
    return V;
  }

  const double c0 = phi.c0();
  std::vector<double> V(n, 0.0), G(n);
  double residual = 0.0;
  for (int it = 0; it < 200; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(V[i]) > phi.v_max())
        throw IterationError("solve_velocity_field_2d: velocity left the response table",
                             std::abs(V[i]));
      G[i] = curve.kappa[i] + (beta / c0) * phi(V[i]);
    }
    const double mean = curve_mean(G);
    residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = G[i] - mean;
      residual = std::max(residual, std::abs(g - V[i]));
      V[i] = (it == 0) ? g : V[i] + 0.5 * (g - V[i]);
    }
    if (residual <= 1e-10) return V;
  }
  throw IterationError("solve_velocity_field_2d: fixed point did not converge in 200 iterations",
                       residual);
}

/// Forward-Euler evolution of the closed curve under the nonlocal law, with
/// uniform-arclength reparametrization after every step.  Snapshots are
/// recorded every `record_stride` steps (0 picks a stride capping ~200
/// frames); the initial and final curves are always included.
inline std::vector<FrontCurve> evolve_curve(const FrontCurve& initial,
                                            double beta, double t0, double t1,
                                            double dt, const PhiTable& phi,
                                            std::size_t record_stride = 0) {
  const long nsteps = std::lround((t1 - t0) / dt);
  if (nsteps <= 0) throw ConfigError("evolve_curve: empty time span");
  if (record_stride == 0)
    record_stride = std::max<std::size_t>(1, static_cast<std::size_t>(nsteps / 200));

  FrontCurve c = curvature_and_normals(initial);
  {
    const double cap = 0.1 * min_spacing(c) * min_spacing(c);
    if (dt > cap)
      throw ConfigError("evolve_curve: dt exceeds the parabolic budget 0.1 min_spacing^2 = " +
                        std::to_string(cap));
  }

  std::vector<FrontCurve> frames;
  frames.push_back(c);
  const std::size_t n = c.size();
  for (long step = 1; step <= nsteps; ++step) {
    const std::vector<double> V = solve_velocity_field_2d(c, beta, phi);
    FrontCurve next;
    next.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      next.nodes[i] = c.nodes[i] + (dt * V[i]) * c.normal[i];
    next = resample_uniform(next, n);
    try {
      c = curvature_and_normals(next);
    } catch (const TopologyError&) {
      throw TopologyError("evolve_curve: curve self-intersected", step);
    }
    if (static_cast<std::size_t>(step) % record_stride == 0 || step == nsteps)
      frames.push_back(c);
  }
  return frames;
}

}  // namespace motility
