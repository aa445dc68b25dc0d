#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "motility/front_curve.hpp"
#include "motility/grid1d.hpp"
#include "motility/phasefield1d.hpp"
#include "motility/potential.hpp"
#include "motility/profile.hpp"
#include "motility/psi.hpp"
#include "motility/tridiag.hpp"

namespace motility {

/// Cell-centred rectangle: node (ix, iy) sits at
/// (x0 + (ix + 1/2) hx, y0 + (iy + 1/2) hy), row-major storage.
struct Grid2D {
  std::size_t nx = 0, ny = 0;
  double x0 = 0.0, y0 = 0.0;
  double hx = 0.0, hy = 0.0;

  static Grid2D square(double x0, double y0, double side, std::size_t n) {
    return {n, n, x0, y0, side / static_cast<double>(n), side / static_cast<double>(n)};
  }
  std::size_t cells() const { return nx * ny; }
  double x(std::size_t ix) const { return x0 + (static_cast<double>(ix) + 0.5) * hx; }
  double y(std::size_t iy) const { return y0 + (static_cast<double>(iy) + 0.5) * hy; }
  double area() const { return nx * hx * ny * hy; }
  std::size_t idx(std::size_t ix, std::size_t iy) const { return iy * nx + ix; }
};

/// State of the 2D system
///
///   rho_t = Lap rho - W'(rho)/eps^2 - P . grad rho + lambda(t)
///   P_t   = eps Lap P - P/eps - beta grad rho
///
/// with Neumann closure for rho (ghost reflection) and Dirichlet 0 for P.
/// lambda is the volume multiplier; mass0 stores the initial discrete mass
/// and lambda_sup the running sup of |lambda| (for the sharper band bound).
struct PlaneState {
  Grid2D g;
  std::vector<double> rho, Px, Py;
  double t = 0.0;
  double eps = 0.0;
  double beta = 0.0;
  double mass0 = 0.0;
  double lambda_sup = 0.0;
};

namespace detail2d {

inline double kahan_sum(const std::vector<double>& v) {
  double s = 0.0, c = 0.0;
  for (double x : v) {
    const double t = x - c;
    const double u = s + t;
    c = (u - s) - t;
    s = u;
  }
  return s;
}

/// Centred gradient with Neumann mirror ghosts.
inline void gradient_neumann(const Grid2D& g, const std::vector<double>& f,
                             std::vector<double>& gx, std::vector<double>& gy) {
  const std::size_t nx = g.nx, ny = g.ny;
  for (std::size_t iy = 0; iy < ny; ++iy) {
    const double* row = f.data() + iy * nx;
    double* out = gx.data() + iy * nx;
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double left = (ix == 0) ? row[0] : row[ix - 1];
      const double right = (ix == nx - 1) ? row[nx - 1] : row[ix + 1];
      out[ix] = (right - left) / (2.0 * g.hx);
    }
  }
  for (std::size_t iy = 0; iy < ny; ++iy) {
    const double* below = f.data() + (iy == 0 ? 0 : iy - 1) * nx;
    const double* above = f.data() + (iy == ny - 1 ? ny - 1 : iy + 1) * nx;
    double* out = gy.data() + iy * nx;
    for (std::size_t ix = 0; ix < nx; ++ix)
      out[ix] = (above[ix] - below[ix]) / (2.0 * g.hy);
  }
}

}  // namespace detail2d

/// Discrete mass (midpoint quadrature).
inline double mass(const PlaneState& s) {
  return detail2d::kahan_sum(s.rho) * s.g.hx * s.g.hy;
}

/// Volume multiplier by midpoint quadrature with centred gradients:
///   lambda = (1/|Omega|) int ( W'(rho)/eps^2 + P . grad rho ) dx.
/// The stepper additionally absorbs the exact constant that zeroes the
/// discrete mass increment, so the reported per-step lambda is this value
/// plus a quadrature-level correction.
inline double lagrange_multiplier(const PlaneState& s) {
  const std::size_t n = s.g.cells();
  std::vector<double> gx(n), gy(n), integrand(n);
  detail2d::gradient_neumann(s.g, s.rho, gx, gy);
  const double ieps2 = 1.0 / (s.eps * s.eps);
  for (std::size_t i = 0; i < n; ++i)
    integrand[i] = DoubleWell::dw(s.rho[i]) * ieps2 + s.Px[i] * gx[i] + s.Py[i] * gy[i];
  return detail2d::kahan_sum(integrand) * s.g.hx * s.g.hy / s.g.area();
}

struct Energies2D {
  double E_eps = 0.0;
  double F_eps = 0.0;
};

/// E = (eps/2) int |grad rho|^2 + (1/eps) int W(rho);  F = int |P|^2 + |P|^4.
inline Energies2D energies(const PlaneState& s) {
  const std::size_t n = s.g.cells();
  std::vector<double> gx(n), gy(n), acc(n);
  detail2d::gradient_neumann(s.g, s.rho, gx, gy);
  for (std::size_t i = 0; i < n; ++i)
    acc[i] = 0.5 * s.eps * (gx[i] * gx[i] + gy[i] * gy[i]) +
             DoubleWell::w(s.rho[i]) / s.eps;
  Energies2D e;
  const double cell = s.g.hx * s.g.hy;
  e.E_eps = detail2d::kahan_sum(acc) * cell;
  for (std::size_t i = 0; i < n; ++i) {
    const double p2 = s.Px[i] * s.Px[i] + s.Py[i] * s.Py[i];
    acc[i] = p2 + p2 * p2;
  }
  e.F_eps = detail2d::kahan_sum(acc) * cell;
  return e;
}

struct BandCheck2D {
  double rho_min = 0.0;
  double rho_max = 0.0;
  bool in_band = false;        // [-eps^{1/4}, 1 + eps^{1/4}]
  bool in_sharp_band = false;  // [-2 eps^2 sup|lambda|, 1 + 2 eps^2 sup|lambda|]
};

inline BandCheck2D max_principle_check(const PlaneState& s) {
  BandCheck2D b;
  b.rho_min = s.rho[0];
  b.rho_max = s.rho[0];
  for (double r : s.rho) {
    b.rho_min = std::min(b.rho_min, r);
    b.rho_max = std::max(b.rho_max, r);
  }
  const double soft = std::pow(s.eps, 0.25);
  b.in_band = b.rho_min >= -soft && b.rho_max <= 1.0 + soft;
  const double sharp = 2.0 * s.eps * s.eps * s.lambda_sup;
  b.in_sharp_band = b.rho_min >= -sharp - 1e-12 && b.rho_max <= 1.0 + sharp + 1e-12;
  return b;
}

struct DiagnosticsRecord {
  double t = 0.0;
  double E_eps = 0.0;
  double F_eps = 0.0;
  double lambda = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  double mass_drift = 0.0;
  bool band_ok = false;
};

/// Semi-implicit stepper with direction-factored backward-Euler diffusion.
///
/// rho update: explicit -W'/eps^2 - P.grad rho + lambda, then
///   (I - dt Dxx)(I - dt Dyy) rho* = rho + dt explicit,
/// then the spatially constant shift that restores the initial mass exactly
/// (its rate is folded into the reported lambda).  P update per component:
///   ((1+dt/eps) I - dt eps Dxx)((1+dt/eps) I - dt eps Dyy)/(1+dt/eps) P* =
///     P - dt beta grad rho.
/// Factorizations are built once per (grid, eps, dt).
class PlaneStepper {
 public:
  PlaneStepper(const PlaneState& proto, double dt)
      : g_(proto.g), dt_(dt), eps_(proto.eps), beta_(proto.beta) {
    const double budget = step_budget_2d(proto.eps, std::min(g_.hx, g_.hy));
    if (!(dt > 0.0) || dt > budget * (1.0 + 1e-12))
      throw ConfigError("PlaneStepper: dt = " + std::to_string(dt) +
                        " exceeds the stability budget " + std::to_string(budget));
    rho_x_ = neumann_lu(g_.nx, dt_ / (g_.hx * g_.hx), 1.0);
    rho_y_ = neumann_lu(g_.ny, dt_ / (g_.hy * g_.hy), 1.0);
    sigma_ = 1.0 + dt_ / eps_;
    p_x_ = dirichlet_lu(g_.nx, dt_ * eps_ / (g_.hx * g_.hx), sigma_);
    p_y_ = dirichlet_lu(g_.ny, dt_ * eps_ / (g_.hy * g_.hy), sigma_);
    const std::size_t n = g_.cells();
    gx_.resize(n);
    gy_.resize(n);
    work_.resize(n);
  }

  static double step_budget_2d(double eps, double h) {
    return step_budget_1d(eps, h);  // same reaction and mesh budgets
  }

  double dt() const { return dt_; }

  /// Advance one step.  Returns the applied multiplier and the residual
  /// mass drift (both cheap); field diagnostics are computed on demand via
  /// diagnostics().
  struct StepRecord {
    double t = 0.0;
    double lambda = 0.0;
    double mass_drift = 0.0;
  };

  StepRecord step(PlaneState& s, long step_index = -1) {
    const std::size_t n = g_.cells();
    const double ieps2 = 1.0 / (eps_ * eps_);
    const double cell = g_.hx * g_.hy;

    detail2d::gradient_neumann(g_, s.rho, gx_, gy_);

    // analytic multiplier on the current state
    for (std::size_t i = 0; i < n; ++i)
      work_[i] = DoubleWell::dw(s.rho[i]) * ieps2 + s.Px[i] * gx_[i] + s.Py[i] * gy_[i];
    const double lambda_analytic = detail2d::kahan_sum(work_) * cell / g_.area();

    // rho: explicit part then factored implicit diffusion
    for (std::size_t i = 0; i < n; ++i)
      work_[i] = s.rho[i] + dt_ * (-DoubleWell::dw(s.rho[i]) * ieps2 -
                                   (s.Px[i] * gx_[i] + s.Py[i] * gy_[i]) +
                                   lambda_analytic);
    sweep_x(rho_x_, work_);
    rho_y_.solve_interleaved(work_.data(), g_.nx, static_cast<std::ptrdiff_t>(g_.nx));
    // exact mass restoration
    const double drift = s.mass0 - detail2d::kahan_sum(work_) * cell;
    const double shift = drift / g_.area();
    for (std::size_t i = 0; i < n; ++i) work_[i] += shift;
    s.rho.swap(work_);
    const double lambda_reported = lambda_analytic + shift / dt_;

    // P components: explicit -beta grad rho (old gradients), factored solve
    update_p(s.Px, gx_);
    update_p(s.Py, gy_);

    s.t += dt_;
    s.lambda_sup = std::max(s.lambda_sup, std::abs(lambda_reported));

    StepRecord rec;
    rec.t = s.t;
    rec.lambda = lambda_reported;
    rec.mass_drift = std::abs(detail2d::kahan_sum(s.rho) * cell - s.mass0);
    if (!std::isfinite(lambda_reported) || !std::isfinite(s.rho[n / 2]))
      throw DivergenceError("PlaneStepper: non-finite state", step_index);
    return rec;
  }

  /// Full field diagnostics (energies, extrema, band) for a record point.
  DiagnosticsRecord diagnostics(const PlaneState& s, double lambda,
                                double mass_drift) const {
    DiagnosticsRecord rec;
    rec.t = s.t;
    const Energies2D e = energies(s);
    rec.E_eps = e.E_eps;
    rec.F_eps = e.F_eps;
    rec.lambda = lambda;
    const BandCheck2D b = max_principle_check(s);
    rec.rho_min = b.rho_min;
    rec.rho_max = b.rho_max;
    rec.band_ok = b.in_band;
    rec.mass_drift = mass_drift;
    return rec;
  }

 private:
  static TridiagLU neumann_lu(std::size_t n, double r, double diag0) {
    std::vector<double> lo(n, -r), di(n, diag0 + 2.0 * r), up(n, -r);
    di[0] = diag0 + r;      // mirror ghost
    di[n - 1] = diag0 + r;
    lo[0] = 0.0;
    up[n - 1] = 0.0;
    return TridiagLU(std::move(lo), di, std::move(up));
  }
  static TridiagLU dirichlet_lu(std::size_t n, double r, double diag0) {
    std::vector<double> lo(n, -r), di(n, diag0 + 2.0 * r), up(n, -r);
    di[0] = diag0 + 3.0 * r;  // ghost = -interior puts 0 on the wall
    di[n - 1] = diag0 + 3.0 * r;
    lo[0] = 0.0;
    up[n - 1] = 0.0;
    return TridiagLU(std::move(lo), di, std::move(up));
  }

  void sweep_x(const TridiagLU& lu, std::vector<double>& f) {
    for (std::size_t iy = 0; iy < g_.ny; ++iy)
      lu.solve(f.data() + iy * g_.nx, 1, f.data() + iy * g_.nx, 1);
  }

  void update_p(std::vector<double>& P, const std::vector<double>& grho) {
    const std::size_t n = g_.cells();
    for (std::size_t i = 0; i < n; ++i)
      work_[i] = P[i] - dt_ * beta_ * grho[i];
    sweep_x(p_x_, work_);
    for (std::size_t i = 0; i < n; ++i) work_[i] *= sigma_;
    p_y_.solve_interleaved(work_.data(), g_.nx, static_cast<std::ptrdiff_t>(g_.nx));
    P.swap(work_);
  }

  Grid2D g_;
  double dt_, eps_, beta_, sigma_ = 1.0;
  TridiagLU rho_x_, rho_y_, p_x_, p_y_;
  std::vector<double> gx_, gy_, work_;
};

/// One-off step with full diagnostics.
inline DiagnosticsRecord step_2d(PlaneState& s, double dt) {
  PlaneStepper st(s, dt);
  const PlaneStepper::StepRecord r = st.step(s);
  return st.diagnostics(s, r.lambda, r.mass_drift);
}

enum class PInit { zero, oriented };

/// Well-prepared 2D data around a closed shape: rho = theta0(d/eps) with d
/// the signed distance (positive inside), P either zero or the leading
/// orientation profile along the inward normal scaled by beta.
inline PlaneState initial_plane_state(const FrontCurve& shape, double eps,
                                      double beta, const Grid2D& g,
                                      const ProfileTable& profile,
                                      PInit pinit = PInit::oriented) {
  if (std::min(g.hx, g.hy) > eps / 8.0 * (1.0 + 1e-12))
    throw ConfigError("initial_plane_state: resolution rule h <= eps/8 violated");
  FrontCurve sh = shape;
  normalize_orientation(sh);
  const std::size_t nseg = sh.size();
  const std::size_t n = g.cells();

  PlaneState s;
  s.g = g;
  s.eps = eps;
  s.beta = beta;
  s.rho.resize(n);
  s.Px.assign(n, 0.0);
  s.Py.assign(n, 0.0);

  // signed distance: min over segments, sign by crossing parity
  std::vector<double> dist(n);
  for (std::size_t iy = 0; iy < g.ny; ++iy) {
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const Vec2 p{g.x(ix), g.y(iy)};
      double best = std::numeric_limits<double>::infinity();
      bool inside = false;
      for (std::size_t k = 0; k < nseg; ++k) {
        const Vec2 a = sh.nodes[k], b = sh.nodes[(k + 1) % nseg];
        best = std::min(best, point_segment_distance(p, a, b));
        if ((a.y > p.y) != (b.y > p.y)) {
          const double xcross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
          if (xcross > p.x) inside = !inside;
        }
      }
      dist[g.idx(ix, iy)] = inside ? best : -best;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    s.rho[i] = ProfileTable::theta0_at(dist[i] / eps);

  if (pinit == PInit::oriented && beta != 0.0) {
    const PsiProfile psi = solve_psi0(0.0, 1.0, profile);
    const LineField psif = psi.field();
    std::vector<double> dx(n), dy(n);
    detail2d::gradient_neumann(g, dist, dx, dy);
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::hypot(dx[i], dy[i]);
      if (mag < 1e-12) continue;
      const double amp = beta * sample(psif, dist[i] / eps);
      s.Px[i] = amp * dx[i] / mag;
      s.Py[i] = amp * dy[i] / mag;
    }
  }

  s.mass0 = mass(s);
  return s;
}

namespace detail2d {

struct EdgeKey {
  std::size_t ix, iy;
  bool vertical;
  bool operator<(const EdgeKey& o) const {
    if (iy != o.iy) return iy < o.iy;
    if (ix != o.ix) return ix < o.ix;
    return vertical < o.vertical;
  }
};

}  // namespace detail2d

/// Marching-squares contour of the rho = 1/2 level set, stitched into a
/// single closed counterclockwise curve resampled to uniform arclength.
/// Zero or several components raise TopologyError carrying the count.
inline FrontCurve extract_contour(const PlaneState& s, double level = 0.5) {
  using detail2d::EdgeKey;
  const Grid2D& g = s.g;
  auto value = [&](std::size_t ix, std::size_t iy) {
    return s.rho[g.idx(ix, iy)] - level;
  };
  auto edge_point = [&](const EdgeKey& e) {
    const double va = value(e.ix, e.iy);
    const double vb = e.vertical ? value(e.ix, e.iy + 1) : value(e.ix + 1, e.iy);
    const double t = va / (va - vb);
    return e.vertical ? Vec2{g.x(e.ix), g.y(e.iy) + t * g.hy}
                      : Vec2{g.x(e.ix) + t * g.hx, g.y(e.iy)};
  };

  // adjacency between cut edges, two links per closed-contour edge
  std::map<EdgeKey, std::vector<EdgeKey>> links;
  auto link = [&](const EdgeKey& a, const EdgeKey& b) {
    links[a].push_back(b);
    links[b].push_back(a);
  };
  for (std::size_t iy = 0; iy + 1 < g.ny; ++iy) {
    for (std::size_t ix = 0; ix + 1 < g.nx; ++ix) {
      const bool b0 = value(ix, iy) >= 0.0;        // bottom-left
      const bool b1 = value(ix + 1, iy) >= 0.0;    // bottom-right
      const bool b2 = value(ix + 1, iy + 1) >= 0.0;
      const bool b3 = value(ix, iy + 1) >= 0.0;
      const int code = (b0 ? 1 : 0) | (b1 ? 2 : 0) | (b2 ? 4 : 0) | (b3 ? 8 : 0);
      if (code == 0 || code == 15) continue;
      const EdgeKey bottom{ix, iy, false}, right{ix + 1, iy, true},
          top{ix, iy + 1, false}, left{ix, iy, true};
      switch (code) {
        case 1: case 14: link(bottom, left); break;
        case 2: case 13: link(bottom, right); break;
        case 4: case 11: link(right, top); break;
        case 8: case 7: link(top, left); break;
        case 3: case 12: link(left, right); break;
        case 6: case 9: link(bottom, top); break;
        case 5: case 10: {
          // saddle: the cell-centre average decides which diagonal joins
          const double center = 0.25 * (value(ix, iy) + value(ix + 1, iy) +
                                        value(ix + 1, iy + 1) + value(ix, iy + 1));
          const bool center_in = center >= 0.0;
          if (code == 5) {  // bottom-left and top-right inside
            if (center_in) { link(bottom, right); link(top, left); }
            else { link(bottom, left); link(right, top); }
          } else {  // bottom-right and top-left inside
            if (center_in) { link(bottom, left); link(right, top); }
            else { link(bottom, right); link(top, left); }
          }
          break;
        }
      }
    }
  }
  if (links.empty())
    throw TopologyError("extract_contour: no level crossings", 0);

  // walk closed chains
  auto same = [](const EdgeKey& a, const EdgeKey& b) {
    return !(a < b) && !(b < a);
  };
  std::map<EdgeKey, bool> used;
  long components = 0;
  std::vector<Vec2> loop;
  for (const auto& [start, nbrs] : links) {
    if (used[start]) continue;
    if (nbrs.size() != 2)
      throw TopologyError("extract_contour: open or tangled contour", -1);
    ++components;
    std::vector<Vec2> pts;
    EdgeKey prev = start, cur = start;
    while (true) {
      used[cur] = true;
      pts.push_back(edge_point(cur));
      const auto& nb = links.at(cur);
      if (nb.size() != 2)
        throw TopologyError("extract_contour: open or tangled contour", -1);
      const EdgeKey next = same(nb[0], prev) ? nb[1] : nb[0];
      prev = cur;
      cur = next;
      if (same(cur, start)) break;
    }
    if (components == 1) loop = std::move(pts);
  }
  if (components != 1)
    throw TopologyError("extract_contour: expected one closed component, found " +
                        std::to_string(components), components);

  FrontCurve c;
  c.nodes = std::move(loop);
  normalize_orientation(c);
  const double per = perimeter(c);
  const std::size_t target =
      std::clamp<std::size_t>(static_cast<std::size_t>(per / (2.0 * std::min(g.hx, g.hy))),
                              64, 1024);
  return resample_uniform(c, target);
}

}  // namespace motility
