#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "motility/grid1d.hpp"
#include "motility/linearized_ac.hpp"
#include "motility/phi.hpp"
#include "motility/potential.hpp"
#include "motility/profile.hpp"
#include "motility/psi.hpp"

namespace motility {

using TimeSeries = std::function<double(double)>;

/// Order-N ansatz for the 1D system in the moving frame y = (x - x_eps)/eps:
///
///   rho ~ theta0(y) + sum_{i=1..N} eps^i theta_i(y, t)
///   P   ~ sum_{i=0..N} eps^i Psi_i(y, t)
///   x_eps(t) = sum_{i=0..N-1} eps^i x_i(t),   V_i = -dx_i/dt.
///
/// theta[i-1][k] is theta_i at time node k (i = 1..N); psi[i][k] is Psi_i
/// (i = 0..N); V[i][k] and x[i][k] run over i = 0..N-1.  Every theta_i is
/// orthogonal to theta0' in the weighted trapezoidal inner product.
struct ExpansionSet {
  int order = 0;
  double beta = 0.0;
  double alpha = 0.0;  // residual exponent, bookkeeping only
  SymmetricGrid grid;
  std::vector<double> t;
  std::vector<std::vector<LineField>> theta;
  std::vector<std::vector<LineField>> psi;
  std::vector<std::vector<double>> V;
  std::vector<std::vector<double>> x;
};

namespace detail {

/// Second-order time derivative of a per-node series on a uniform time grid.
template <typename T, typename Axpy>
std::vector<T> time_derivative(const std::vector<T>& f, double dt, Axpy axpy) {
  const std::size_t n = f.size();
  std::vector<T> d(n, f[0]);
  auto combo = [&](T& out, double c0, const T& a, double c1, const T& b,
                   double c2, const T& c) {
    axpy(out, c0 / (2.0 * dt), a, c1 / (2.0 * dt), b, c2 / (2.0 * dt), c);
  };
  combo(d[0], -3.0, f[0], 4.0, f[1], -1.0, f[2]);
  for (std::size_t k = 1; k + 1 < n; ++k)
    combo(d[k], -1.0, f[k - 1], 0.0, f[k], 1.0, f[k + 1]);
  combo(d[n - 1], 3.0, f[n - 1], -4.0, f[n - 2], 1.0, f[n - 3]);
  return d;
}

inline std::vector<LineField> time_derivative_fields(
    const std::vector<LineField>& f, double dt) {
  return time_derivative(f, dt, [](LineField& out, double c0, const LineField& a,
                                   double c1, const LineField& b, double c2,
                                   const LineField& c) {
    for (std::size_t j = 0; j < out.size(); ++j)
      out.v[j] = c0 * a.v[j] + c1 * b.v[j] + c2 * c.v[j];
  });
}

inline void check_uniform(const std::vector<double>& t) {
  if (t.size() >= 2) {
    const double dt = t[1] - t[0];
    if (!(dt > 0.0)) throw ConfigError("time grid must be increasing");
    for (std::size_t k = 1; k + 1 < t.size(); ++k)
      if (std::abs((t[k + 1] - t[k]) - dt) > 1e-12 * std::max(1.0, std::abs(dt)))
        throw ConfigError("time grid must be uniform");
  }
}

}  // namespace detail

/// Leading-order velocity from the first solvability condition:
/// the unique root of
///
///   g(V) = c0 V - int Psi0(y; V, beta) (theta0')^2 dy - F
///        = c0 V - beta Phi(-V) - F
///
/// on [-5, 5] (the forcing and response sizes of interest keep every root
/// well inside).  A 1e-3 scan of the tabulated response locates sign
/// changes; each bracket is polished against the exact quadrature to
/// residual <= 1e-12.  No sign change raises RootError; several raise
/// MultiplicityError carrying all polished roots.
inline double solve_v0(double F_value, double beta, const PhiTable& phi) {
  if (!(std::abs(beta) <= 0.5))
    throw ConfigError("solve_v0: |beta| <= 0.5 required");
  const double c0 = phi.c0();
  auto g_scan = [&](double V) { return c0 * V - beta * phi(-V) - F_value; };
  auto g_exact = [&](double V) {
    const PsiProfile psi = solve_psi0(V, beta, phi.profile());
    return c0 * V - inner(psi.field(), phi.profile().weight_field()) - F_value;
  };
  auto g_slope = [&](double V) { return c0 + beta * phi.slope(-V); };

  const double vmax = phi.v_max();
  const long nsteps = std::lround(2.0 * vmax / 1e-3);
  std::vector<std::pair<double, double>> brackets;
  double vprev = -vmax, gprev = g_scan(vprev);
  for (long s = 1; s <= nsteps; ++s) {
    const double v = -vmax + 2.0 * vmax * static_cast<double>(s) / nsteps;
    const double gv = g_scan(v);
    if (gprev == 0.0 || gprev * gv < 0.0) brackets.emplace_back(vprev, v);
    vprev = v;
    gprev = gv;
  }
  if (brackets.empty())
    throw RootError("solve_v0: no sign change of the velocity equation on the bracket");

  std::vector<double> roots;
  for (auto [a, b] : brackets) {
    double ga = g_scan(a);
    for (int it = 0; it < 60 && b - a > 1e-11; ++it) {
      const double m = 0.5 * (a + b);
      const double gm = g_scan(m);
      if (ga * gm <= 0.0) b = m; else { a = m; ga = gm; }
    }
    double v = 0.5 * (a + b);
    double gv = g_exact(v);
    for (int it = 0; it < 8 && std::abs(gv) > 1e-13; ++it) {
      v = std::clamp(v - gv / g_slope(v), -vmax, vmax);
      gv = g_exact(v);
    }
    if (std::abs(gv) > 1e-10)
      throw RootError("solve_v0: polish failed, residual " + std::to_string(gv));
    roots.push_back(v);
  }
  if (roots.size() > 1)
    throw MultiplicityError("solve_v0: multiple roots of the velocity equation",
                            roots);
  return roots.front();
}

/// Build the order-N expansion over a uniform time grid.
///
/// Order pass i (= 1..N) per time node:
///   1. V_{i-1} from the order-i solvability condition.  For i = 1 this is
///      the nonlinear scalar equation solved by solve_v0; for i >= 2 the
///      condition is affine in V_{i-1} because Psi_{i-1} = P0 + V_{i-1} P1
///      with P1 the advected solve against Psi0'.
///   2. Psi_{i-1} assembled from that decomposition.
///   3. theta_i from the bordered linearized solve, <theta_i, theta0'> = 0.
/// Time derivatives (Psi_{i-2}. and theta. terms) are centred second-order
/// differences across the completed previous pass, so each order sweeps all
/// time nodes before the next order starts.  The final Psi_N solve drops the
/// undetermined V_N term.
inline ExpansionSet build_expansion(int N, const TimeSeries& F, double beta,
                                    const std::vector<double>& t_grid,
                                    const PhiTable& phi) {
  if (N < 0 || N > 3)
    throw ConfigError("build_expansion: order must be 0..3, got " + std::to_string(N));
  if (!(std::abs(beta) <= 0.5))
    throw ConfigError("build_expansion: |beta| <= 0.5 required");
  if (t_grid.empty()) throw ConfigError("build_expansion: empty time grid");
  if (N >= 1 && t_grid.size() < 3)
    throw ConfigError("build_expansion: need >= 3 time nodes for order >= 1");
  detail::check_uniform(t_grid);

  const ProfileTable& prof = phi.profile();
  const std::size_t nt = t_grid.size();
  const std::size_t ny = prof.size();
  const LineField th0p = prof.dtheta0_field();
  const double c0q = inner(th0p, th0p);

  ExpansionSet e;
  e.order = N;
  e.beta = beta;
  e.alpha = static_cast<double>(N);
  e.grid = prof.grid;
  e.t = t_grid;
  e.theta.assign(N, std::vector<LineField>(nt));
  e.psi.assign(N + 1, std::vector<LineField>(nt));
  e.V.assign(N, std::vector<double>(nt, 0.0));
  e.x.assign(N, std::vector<double>(nt, 0.0));

  const double dt = nt >= 2 ? t_grid[1] - t_grid[0] : 1.0;

  auto annotate = [](const std::string& what, int order, std::size_t node) {
    return what + " at expansion order " + std::to_string(order) +
           ", time node " + std::to_string(node);
  };

  std::vector<LineField> psi_prev_dot;    // d/dt of psi[i-2]
  std::vector<LineField> theta_dot_im2;   // d/dt of theta_{i-2}

  for (int i = 1; i <= N; ++i) {
    for (std::size_t k = 0; k < nt; ++k) {
      try {
        if (i == 1) {
          const double V0 = solve_v0(F(t_grid[k]), beta, phi);
          e.V[0][k] = V0;
          e.psi[0][k] = solve_psi0(V0, beta, prof).field();
          LineField rhs(prof.grid);
          for (std::size_t j = 0; j < ny; ++j)
            rhs.v[j] = (-V0 + e.psi[0][k].v[j]) * th0p.v[j] + F(t_grid[k]);
          e.theta[0][k] = linearized_ac_solve(rhs, prof);
        } else {
          const double V0 = e.V[0][k];
          const LineField psi0p = derivative(e.psi[0][k]);
          const LineField P1 = detail::solve_advected(V0, psi0p, prof);

          // base right-hand side of the Psi_{i-1} equation (V_{i-1} = 0)
          LineField rhs_psi(prof.grid);
          {
            const LineField thp = derivative(e.theta[i - 2][k]);
            for (std::size_t j = 0; j < ny; ++j)
              rhs_psi.v[j] = -beta * thp.v[j] + psi_prev_dot[k].v[j];
            for (int jj = 1; jj <= i - 2; ++jj) {
              const LineField pp = derivative(e.psi[i - 1 - jj][k]);
              for (std::size_t j = 0; j < ny; ++j)
                rhs_psi.v[j] += e.V[jj][k] * pp.v[j];
            }
          }
          const LineField P0 = detail::solve_advected(V0, rhs_psi, prof);

          // base RHS of the theta_i equation with V_{i-1} = 0, Psi_{i-1} = P0
          LineField base(prof.grid);
          if (i == 2) {
            const LineField th1p = derivative(e.theta[0][k]);
            for (std::size_t j = 0; j < ny; ++j) {
              const double th1 = e.theta[0][k].v[j];
              base.v[j] = -V0 * th1p.v[j] -
                          0.5 * DoubleWell::d3w(prof.theta0[j]) * th1 * th1 +
                          e.psi[0][k].v[j] * th1p.v[j] + P0.v[j] * th0p.v[j];
            }
          } else {  // i == 3
            const LineField th1p = derivative(e.theta[0][k]);
            const LineField th2p = derivative(e.theta[1][k]);
            for (std::size_t j = 0; j < ny; ++j) {
              const double th1 = e.theta[0][k].v[j];
              const double th2 = e.theta[1][k].v[j];
              const double dW3 = DoubleWell::d3w(prof.theta0[j]) * th1 * th2 +
                                 DoubleWell::d4w(prof.theta0[j]) * th1 * th1 * th1 / 6.0;
              base.v[j] = -theta_dot_im2[k].v[j] - V0 * th2p.v[j] -
                          e.V[1][k] * th1p.v[j] - dW3 +
                          e.psi[0][k].v[j] * th2p.v[j] +
                          e.psi[1][k].v[j] * th1p.v[j] + P0.v[j] * th0p.v[j];
            }
          }

          // solvability: <base, theta0'> + V_{i-1} (<P1 theta0', theta0'> - c0) = 0
          LineField vcoef(prof.grid);
          for (std::size_t j = 0; j < ny; ++j)
            vcoef.v[j] = (P1.v[j] - 1.0) * th0p.v[j];
          const double a = inner(base, th0p);
          const double b = inner(vcoef, th0p);
          if (std::abs(b) < 1e-6 * c0q)
            throw SolvabilityError("build_expansion: degenerate velocity coefficient", b);
          const double Vi = -a / b;
          e.V[i - 1][k] = Vi;
          LineField psi_i(prof.grid);
          for (std::size_t j = 0; j < ny; ++j)
            psi_i.v[j] = P0.v[j] + Vi * P1.v[j];
          e.psi[i - 1][k] = psi_i;
          for (std::size_t j = 0; j < ny; ++j) base.v[j] += Vi * vcoef.v[j];
          e.theta[i - 1][k] = linearized_ac_solve(base, prof);
        }
      } catch (const MultiplicityError&) {
        throw;
      } catch (const SolvabilityError& err) {
        throw SolvabilityError(annotate(err.what(), i, k), err.inner_product);
      } catch (const RootError& err) {
        throw RootError(annotate(err.what(), i, k));
      } catch (const Error& err) {
        throw Error(annotate(err.what(), i, k));
      }
    }
    // derivatives consumed by the next order pass
    psi_prev_dot = detail::time_derivative_fields(e.psi[i - 1], dt);
    if (i >= 2)
      theta_dot_im2 = detail::time_derivative_fields(e.theta[i - 2], dt);
  }

  // Final orientation order Psi_N (V_N undetermined, dropped).
  for (std::size_t k = 0; k < nt; ++k) {
    const double V0 = N >= 1 ? e.V[0][k] : 0.0;
    if (N == 0) {
      e.psi[0][k] = solve_psi0(V0, beta, prof).field();
    } else {
      LineField rhs(prof.grid);
      const LineField thNp = derivative(e.theta[N - 1][k]);
      for (std::size_t j = 0; j < ny; ++j)
        rhs.v[j] = -beta * thNp.v[j] + psi_prev_dot[k].v[j];
      for (int jj = 1; jj <= N - 1; ++jj) {
        const LineField pp = derivative(e.psi[N - jj][k]);
        for (std::size_t j = 0; j < ny; ++j)
          rhs.v[j] += e.V[jj][k] * pp.v[j];
      }
      e.psi[N][k] = detail::solve_advected(V0, rhs, prof);
    }
  }

  // x_i(t) = -int_0^t V_i (cumulative trapezoid).
  for (int i = 0; i < N; ++i)
    for (std::size_t k = 1; k < nt; ++k)
      e.x[i][k] = e.x[i][k - 1] - 0.5 * dt * (e.V[i][k - 1] + e.V[i][k]);

  return e;
}

/// Interface position of the ansatz at time node k.
inline double expansion_front(const ExpansionSet& e, double eps, std::size_t k) {
  double xf = 0.0, p = 1.0;
  for (int i = 0; i < e.order; ++i, p *= eps) xf += p * e.x[i][k];
  return xf;
}

/// Front velocity -dx_eps/dt of the ansatz at time node k.
inline double expansion_velocity(const ExpansionSet& e, double eps, std::size_t k) {
  double v = 0.0, p = 1.0;
  for (int i = 0; i < e.order; ++i, p *= eps) v += p * e.V[i][k];
  return v;
}

/// Space-time L2 defects of the ansatz in the two model equations,
///
///   d_rho = rho_t - rho_xx + W'(rho)/eps^2 - P rho_x - F/eps
///   d_P   = P_t - eps P_xx + P/eps - beta rho_x,
///
/// measured in the x measure (dx = eps dy) over the tabulated window and the
/// expansion's time grid.  Spatial derivatives are centred differences on
/// the y grid; the moving-frame time derivative of a field f(y, t) at fixed
/// x is f_t + (V_eps/eps) f_y.
struct DefectNorms {
  double defect_rho = 0.0;
  double defect_P = 0.0;
};

inline DefectNorms defect_norm(const ExpansionSet& e, double eps,
                               const TimeSeries& F, double beta) {
  if (!(eps > 0.0 && eps <= 0.5))
    throw ConfigError("defect_norm: eps must lie in (0, 0.5]");
  if (!(e.grid.h <= 0.1))
    throw ResolutionError("defect_norm: ansatz grid too coarse (need h <= 0.1 so dx <= eps/10)");
  if (e.t.size() < 2)
    throw ConfigError("defect_norm: need at least two time nodes");

  const std::size_t nt = e.t.size();
  const std::size_t ny = e.grid.size();
  const double dt = e.t[1] - e.t[0];
  const double h = e.grid.h;
  const int N = e.order;

  // assemble rho(y, t), P(y, t) on the grid and their time derivatives
  std::vector<LineField> rho(nt, LineField(e.grid)), P(nt, LineField(e.grid));
  for (std::size_t k = 0; k < nt; ++k) {
    for (std::size_t j = 0; j < ny; ++j) {
      double r = ProfileTable::theta0_at(e.grid.y(j));
      double q = 0.0;
      double p = 1.0;  // eps^i
      for (int i = 0; i <= N; ++i) {
        if (i >= 1) r += p * e.theta[i - 1][k].v[j];
        q += p * e.psi[i][k].v[j];
        p *= eps;
      }
      rho[k].v[j] = r;
      P[k].v[j] = q;
    }
  }
  const std::vector<LineField> rho_t =
      nt >= 3 ? detail::time_derivative_fields(rho, dt) : std::vector<LineField>(nt, LineField(e.grid));
  const std::vector<LineField> P_t =
      nt >= 3 ? detail::time_derivative_fields(P, dt) : std::vector<LineField>(nt, LineField(e.grid));

  double acc_r = 0.0, acc_p = 0.0;
  for (std::size_t k = 0; k < nt; ++k) {
    const double Veps = expansion_velocity(e, eps, k);
    const LineField rho_y = derivative(rho[k]);
    const LineField rho_yy = second_derivative_dirichlet(rho[k]);
    const LineField P_y = derivative(P[k]);
    const LineField P_yy = second_derivative_dirichlet(P[k]);
    const double Fk = F(e.t[k]);
    const double wt = (k == 0 || k == nt - 1) ? 0.5 : 1.0;
    double sr = 0.0, sp = 0.0;
    for (std::size_t j = 1; j + 1 < ny; ++j) {
      const double drho = rho_t[k].v[j] + (Veps / eps) * rho_y.v[j] -
                          rho_yy.v[j] / (eps * eps) +
                          DoubleWell::dw(rho[k].v[j]) / (eps * eps) -
                          P[k].v[j] * rho_y.v[j] / eps - Fk / eps;
      const double dP = P_t[k].v[j] + (Veps / eps) * P_y.v[j] -
                        P_yy.v[j] / eps + P[k].v[j] / eps -
                        beta * rho_y.v[j] / eps;
      sr += drho * drho;
      sp += dP * dP;
    }
    acc_r += wt * sr;
    acc_p += wt * sp;
  }
  const double measure = (eps * h) * dt;  // dx dt
  DefectNorms d;
  d.defect_rho = std::sqrt(acc_r * measure);
  d.defect_P = std::sqrt(acc_p * measure);
  return d;
}

}  // namespace motility
