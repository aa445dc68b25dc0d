#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "motility/expansion.hpp"
#include "motility/grid1d.hpp"
#include "motility/potential.hpp"
#include "motility/profile.hpp"
#include "motility/tridiag.hpp"

namespace motility {

/// State of the 1D model system on a truncated line:
///
///   rho_t = rho_xx - W'(rho)/eps^2 + P rho_x + F(t)/eps
///   P_t   = eps P_xx - P/eps + beta rho_x
///
/// with homogeneous Neumann closure for rho and Dirichlet 0 for P at the
/// truncated ends.  Front-type states cross rho = 1/2 exactly once (rho -> 0
/// on the left, -> 1 on the right).
struct LineState {
  double x_lo = 0.0;
  double hx = 0.0;
  std::vector<double> rho;
  std::vector<double> P;
  double t = 0.0;
  double eps = 0.0;
  double beta = 0.0;

  std::size_t size() const { return rho.size(); }
  double x(std::size_t j) const { return x_lo + hx * static_cast<double>(j); }
  double x_hi() const { return x(size() - 1); }
};

struct GridSpec1D {
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::size_t n = 0;
};

/// dt budget of the semi-implicit scheme: dt <= min(eps^2 / K_W, h^2 / 4)
/// with K_W the largest |W''| over the working band
/// [-eps^{1/4} - 0.1, 1 + eps^{1/4} + 0.1].
inline double step_budget_1d(double eps, double hx) {
  const double edge = 1.0 + std::pow(eps, 0.25) + 0.1;
  const double kw =
      std::max(std::abs(DoubleWell::d2w(1.0 - edge)), std::abs(DoubleWell::d2w(edge)));
  return std::min(eps * eps / kw, hx * hx / 4.0);
}

/// Interpolated rho = 1/2 crossing; with several crossings the one with the
/// steepest gradient wins.
inline double extract_front(const LineState& s) {
  const std::size_t n = s.size();
  double best_slope = -1.0, xf = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double a = s.rho[j] - 0.5, b = s.rho[j + 1] - 0.5;
    if (a == 0.0 || a * b < 0.0) {
      const double slope = std::abs(b - a);
      if (slope > best_slope) {
        best_slope = slope;
        xf = (slope == 0.0) ? s.x(j) : s.x(j) + s.hx * (-a) / (b - a);
      }
    }
  }
  if (s.rho[n - 1] == 0.5 && best_slope < 0.0) return s.x(n - 1);
  if (best_slope < 0.0)
    throw FrontLostError("extract_front: no rho = 1/2 crossing in the state");
  return xf;
}

/// Well-prepared initial data: the order-N ansatz centred at x_front.
/// theta0 is evaluated in closed form; the corrections theta_i, Psi_i come
/// from build_expansion at t = 0 (an internal three-node time grid feeds the
/// time-derivative stencils).  N = 0 gives rho = theta0((x - x_front)/eps),
/// P = Psi_0 with the advection of the leading velocity.
inline LineState init_well_prepared(double eps, double beta, double x_front,
                                    int N, const TimeSeries& F,
                                    const GridSpec1D& g, const PhiTable& phi) {
  if (g.n < 8 || !(g.x_hi > g.x_lo))
    throw ConfigError("init_well_prepared: malformed grid spec");
  const double hx = (g.x_hi - g.x_lo) / static_cast<double>(g.n - 1);
  if (hx > eps / 10.0 * (1.0 + 1e-12))
    throw ConfigError("init_well_prepared: need spacing <= eps/10, got " +
                      std::to_string(hx));
  if (x_front - g.x_lo < 20.0 * eps || g.x_hi - x_front < 20.0 * eps)
    throw ConfigError("init_well_prepared: front closer than 20 eps to a boundary");

  const std::vector<double> tg = {0.0, 1e-3, 2e-3};
  const ExpansionSet e = build_expansion(N, F, beta, tg, phi);

  LineState s;
  s.x_lo = g.x_lo;
  s.hx = hx;
  s.t = 0.0;
  s.eps = eps;
  s.beta = beta;
  s.rho.resize(g.n);
  s.P.resize(g.n);
  for (std::size_t j = 0; j < g.n; ++j) {
    const double y = (s.x(j) - x_front) / eps;
    double r = ProfileTable::theta0_at(y);
    double p = 0.0;
    double epow = 1.0;
    for (int i = 0; i <= N; ++i) {
      if (i >= 1) r += epow * sample(e.theta[i - 1][0], y);
      p += epow * sample(e.psi[i][0], y);
      epow *= eps;
    }
    s.rho[j] = r;
    s.P[j] = p;
  }
  return s;
}

/// Reusable semi-implicit stepper: backward-Euler diffusion (and the
/// screening -P/eps term), explicit reaction W'/eps^2, coupling P rho_x,
/// beta rho_x and forcing F/eps.  Factorizations depend only on
/// (hx, n, eps, dt) and are reused across steps.
class LineStepper {
 public:
  LineStepper(const LineState& proto, double dt)
      : dt_(dt), hx_(proto.hx), eps_(proto.eps), beta_(proto.beta),
        n_(proto.size()) {
    const double budget = step_budget_1d(proto.eps, proto.hx);
    if (!(dt > 0.0) || dt > budget * (1.0 + 1e-12))
      throw ConfigError("LineStepper: dt = " + std::to_string(dt) +
                        " exceeds the stability budget " + std::to_string(budget));
    const double ih2 = 1.0 / (hx_ * hx_);
    {
      // rho: (1/dt) I - D2 with Neumann mirror closure
      std::vector<double> lo(n_, -ih2), di(n_, 1.0 / dt_ + 2.0 * ih2), up(n_, -ih2);
      lo[0] = 0.0;
      up[0] = -2.0 * ih2;
      lo[n_ - 1] = -2.0 * ih2;
      up[n_ - 1] = 0.0;
      rho_lu_ = TridiagLU(std::move(lo), di, std::move(up));
    }
    {
      // P: (1/dt + 1/eps) I - eps D2 with Dirichlet rows at the ends
      std::vector<double> lo(n_, -eps_ * ih2), di(n_, 1.0 / dt_ + 1.0 / eps_ + 2.0 * eps_ * ih2),
          up(n_, -eps_ * ih2);
      lo[0] = up[0] = 0.0;
      di[0] = 1.0;
      lo[n_ - 1] = up[n_ - 1] = 0.0;
      di[n_ - 1] = 1.0;
      p_lu_ = TridiagLU(std::move(lo), di, std::move(up));
    }
    rhs_rho_.resize(n_);
    rhs_p_.resize(n_);
  }

  double dt() const { return dt_; }

  /// Advance one step.  `step_index` only labels divergence errors.
  void step(LineState& s, double F_value, long step_index = -1) {
    const double ieps2 = 1.0 / (eps_ * eps_);
    const double Fterm = F_value / eps_;
    for (std::size_t j = 0; j < n_; ++j) {
      // Neumann mirror makes the boundary gradient vanish
      const double left = (j == 0) ? s.rho[1] : s.rho[j - 1];
      const double right = (j == n_ - 1) ? s.rho[n_ - 2] : s.rho[j + 1];
      const double rho_x = (right - left) / (2.0 * hx_);
      rhs_rho_[j] = s.rho[j] / dt_ - DoubleWell::dw(s.rho[j]) * ieps2 +
                    s.P[j] * rho_x + Fterm;
      rhs_p_[j] = s.P[j] / dt_ + beta_ * rho_x;
    }
    rhs_p_[0] = 0.0;
    rhs_p_[n_ - 1] = 0.0;
    rho_lu_.solve(rhs_rho_.data(), 1, s.rho.data(), 1);
    p_lu_.solve(rhs_p_.data(), 1, s.P.data(), 1);
    s.t += dt_;
    if (!std::isfinite(s.rho[n_ / 2]) || !std::isfinite(s.P[n_ / 2]) ||
        !std::isfinite(s.rho[0]) || !std::isfinite(s.rho[n_ - 1]))
      throw DivergenceError("LineStepper: non-finite state", step_index);
  }

 private:
  double dt_, hx_, eps_, beta_;
  std::size_t n_;
  TridiagLU rho_lu_, p_lu_;
  std::vector<double> rhs_rho_, rhs_p_;
};

/// One-off step (builds a stepper; loops should hold a LineStepper).
inline LineState step_1d(const LineState& s, double dt, double F_value) {
  LineStepper stepper(s, dt);
  LineState out = s;
  stepper.step(out, F_value);
  return out;
}

/// First-order residual of the single-front ansatz:
///   rho1(x) = (rho(x) - theta0((x - x_f)/eps)) / eps,  x_f = extract_front,
/// together with its discrete L2(dx) norm.
struct Residual1D {
  std::vector<double> rho1;
  double norm = 0.0;
  double x_front = 0.0;
};

inline Residual1D residual_profile(const LineState& s, const ProfileTable&) {
  Residual1D r;
  r.x_front = extract_front(s);
  r.rho1.resize(s.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double y = (s.x(j) - r.x_front) / s.eps;
    r.rho1[j] = (s.rho[j] - ProfileTable::theta0_at(y)) / s.eps;
    const double w = (j == 0 || j + 1 == s.size()) ? 0.5 : 1.0;
    acc += w * r.rho1[j] * r.rho1[j];
  }
  r.norm = std::sqrt(acc * s.hx);
  return r;
}

/// Extrema check against the soft band [-eps^{1/4}, 1 + eps^{1/4}].
struct BandCheck1D {
  double rho_min = 0.0;
  double rho_max = 0.0;
  bool in_band = false;
};

inline BandCheck1D band_check(const LineState& s) {
  BandCheck1D b;
  b.rho_min = s.rho[0];
  b.rho_max = s.rho[0];
  for (double r : s.rho) {
    b.rho_min = std::min(b.rho_min, r);
    b.rho_max = std::max(b.rho_max, r);
  }
  const double m = std::pow(s.eps, 0.25);
  b.in_band = (b.rho_min >= -m) && (b.rho_max <= 1.0 + m);
  return b;
}

}  // namespace motility
