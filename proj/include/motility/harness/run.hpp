#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <string>
#include <utility>
#include <vector>

#include "motility/front_law.hpp"
#include "motility/harness/config.hpp"
#include "motility/harness/csv.hpp"
#include "motility/phasefield1d.hpp"
#include "motility/phasefield2d.hpp"
#include "motility/version.hpp"

namespace motility::harness {

/// Everything a run leaves behind: the manifest (config echo + results), the
/// written files and the in-memory summary scalars.
struct RunArtifact {
  std::string out_dir;
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<std::string> files;

  void add(const std::string& key, double v) { summary.emplace_back(key, fmt(v)); }
  void add(const std::string& key, const std::string& v) { summary.emplace_back(key, v); }

  double value(const std::string& key) const {
    for (const auto& [k, v] : summary)
      if (k == key) return std::stod(v);
    throw Error("summary key '" + key + "' not found");
  }
  bool has(const std::string& key) const {
    for (const auto& [k, v] : summary)
      if (k == key) return true;
    return false;
  }
};

/// Pairwise empirical orders log(err_i/err_{i+1}) / log(eps_i/eps_{i+1}).
inline std::vector<double> convergence_table(
    const std::vector<std::pair<double, double>>& errors) {
  if (errors.size() < 2)
    throw ConfigError("convergence_table: need at least two (eps, err) entries");
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const auto [e0, f0] = errors[i];
    const auto [e1, f1] = errors[i + 1];
    if (!(e1 < e0)) throw ConfigError("convergence_table: eps must decrease");
    if (!(f0 > 0.0) || !(f1 > 0.0))
      throw DomainError("convergence_table: errors must be positive");
    orders.push_back(std::log(f0 / f1) / std::log(e0 / e1));
  }
  return orders;
}

namespace detail {

inline FrontCurve make_shape(const GeometrySpec& g) {
  switch (g.kind) {
    case GeometryKind::circle:
      return make_circle({g.cx, g.cy}, g.radius, g.nodes);
    case GeometryKind::ellipse:
      return make_ellipse({g.cx, g.cy}, g.a, g.b, g.nodes);
    case GeometryKind::polygon: {
      FrontCurve c;
      for (std::size_t i = 0; i + 1 < g.points.size(); i += 2)
        c.nodes.push_back({g.points[i], g.points[i + 1]});
      return resample_uniform(c, g.nodes);
    }
    case GeometryKind::front1d:
      throw ConfigError("make_shape: 1D geometry has no curve");
  }
  throw ConfigError("make_shape: unreachable");
}

inline double forcing_peak(const TimeSeries& F, double T) {
  double m = 0.0;
  for (int k = 0; k <= 1000; ++k)
    m = std::max(m, std::abs(F(T * k / 1000.0)));
  return m;
}

struct Pde1dTrace {
  std::vector<double> t, x, residual, rho_min, rho_max;
  std::vector<bool> band;
  LineState final_state;
  double dt = 0.0;
};

inline Pde1dTrace run_pde1d_trace(double eps, const RunConfig& c,
                                  const PhiTable& phi) {
  const TimeSeries F = c.forcing.series();
  const double T = c.t_final;
  const double vbar = (forcing_peak(F, T) + std::abs(c.beta) * 0.02) / phi.c0();
  const double span = 30.0 * eps * std::max(1.0, T * vbar);
  const double x0 = c.geometry.x0;
  const double hx_target = eps / 10.0;
  const std::size_t n =
      static_cast<std::size_t>(std::ceil(2.0 * span / hx_target)) + 1;
  GridSpec1D g{x0 - span, x0 + span, n};

  LineState s = init_well_prepared(eps, c.beta, x0, c.order, F, g, phi);
  const double budget = step_budget_1d(eps, s.hx);
  const double dt = (c.dt > 0.0) ? c.dt : 0.9 * budget;
  LineStepper stepper(s, dt);
  const long nsteps = static_cast<long>(std::ceil(T / dt));
  const long stride = std::max(1L, nsteps / 200);

  Pde1dTrace tr;
  tr.dt = dt;
  auto record = [&]() {
    tr.t.push_back(s.t);
    tr.x.push_back(extract_front(s));
    tr.residual.push_back(residual_profile(s, phi.profile()).norm);
    const BandCheck1D b = band_check(s);
    tr.rho_min.push_back(b.rho_min);
    tr.rho_max.push_back(b.rho_max);
    tr.band.push_back(b.in_band);
  };
  record();
  for (long k = 0; k < nsteps; ++k) {
    stepper.step(s, F(s.t), k);
    if ((k + 1) % stride == 0 || k + 1 == nsteps) record();
  }
  tr.final_state = std::move(s);
  return tr;
}

inline double interp_trajectory(const FrontTrajectory1D& tr, double t) {
  if (t <= tr.t.front()) return tr.x0.front();
  if (t >= tr.t.back()) return tr.x0.back();
  const auto it = std::upper_bound(tr.t.begin(), tr.t.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - tr.t.begin());
  const double w = (t - tr.t[j - 1]) / (tr.t[j] - tr.t[j - 1]);
  return tr.x0[j - 1] + w * (tr.x0[j] - tr.x0[j - 1]);
}

inline std::string bool_cell(bool b) { return b ? "1" : "0"; }

}  // namespace detail

// ---------------------------------------------------------------------------
// mode drivers

inline void drive_front1d(const RunConfig& c, const PhiTable& phi,
                          RunArtifact& art) {
  const double dt = (c.dt > 0.0) ? c.dt : c.t_final / 200.0;
  const FrontTrajectory1D tr = integrate_front_1d(
      c.forcing.series(), c.beta, c.geometry.x0, 0.0, c.t_final, dt, phi);
  CsvTable t;
  t.header = {"t", "x0", "v", "multiplicity"};
  for (std::size_t k = 0; k < tr.t.size(); ++k)
    t.rows.push_back({fmt(tr.t[k]), fmt(tr.x0[k]), fmt(tr.v[k]),
                      std::to_string(tr.branch_flags[k])});
  const std::string path = art.out_dir + "/front1d.csv";
  t.write(path);
  art.files.push_back(path);
  art.add("final_x", tr.x0.back());
  art.add("mean_slope", (tr.x0.back() - tr.x0.front()) / c.t_final);
  int mult = 0;
  for (int m : tr.branch_flags) mult = std::max(mult, m);
  art.add("max_multiplicity", static_cast<double>(mult));
}

inline void drive_pde1d(const RunConfig& c, const PhiTable& phi,
                        RunArtifact& art) {
  const detail::Pde1dTrace tr = detail::run_pde1d_trace(c.eps.front(), c, phi);
  CsvTable t;
  t.header = {"t", "x_front", "residual_norm", "rho_min", "rho_max", "band_ok"};
  double sup_res = 0.0;
  bool band_all = true;
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    t.rows.push_back({fmt(tr.t[k]), fmt(tr.x[k]), fmt(tr.residual[k]),
                      fmt(tr.rho_min[k]), fmt(tr.rho_max[k]),
                      detail::bool_cell(tr.band[k])});
    sup_res = std::max(sup_res, tr.residual[k]);
    band_all = band_all && tr.band[k];
  }
  const std::string path = art.out_dir + "/pde1d.csv";
  t.write(path);
  art.files.push_back(path);
  art.add("final_front", tr.x.back());
  art.add("sup_residual", sup_res);
  art.add("band_ok", band_all ? 1.0 : 0.0);
  art.add("dt", tr.dt);
}

inline void drive_converge1d(const RunConfig& c, const PhiTable& phi,
                             RunArtifact& art) {
  const TimeSeries F = c.forcing.series();
  struct PerEps {
    double sup_err = 0.0, sup_res = 0.0;
  };
  std::vector<PerEps> results(c.eps.size());

  auto run_one = [&](std::size_t i) {
    const detail::Pde1dTrace tr = detail::run_pde1d_trace(c.eps[i], c, phi);
    const FrontTrajectory1D ref = integrate_front_1d(
        F, c.beta, tr.x.front(), 0.0, c.t_final, c.t_final / 1000.0, phi);
    PerEps r;
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
      r.sup_err = std::max(r.sup_err,
                           std::abs(tr.x[k] - detail::interp_trajectory(ref, tr.t[k])));
      r.sup_res = std::max(r.sup_res, tr.residual[k]);
    }
    return r;
  };

  // independent runs, at most `jobs` in flight, results stored in eps order
  for (std::size_t base = 0; base < c.eps.size();
       base += static_cast<std::size_t>(c.jobs)) {
    std::vector<std::future<PerEps>> wave;
    const std::size_t end =
        std::min(c.eps.size(), base + static_cast<std::size_t>(c.jobs));
    for (std::size_t i = base; i < end; ++i)
      wave.push_back(std::async(std::launch::async, run_one, i));
    for (std::size_t i = base; i < end; ++i)
      results[i] = wave[i - base].get();
  }

  std::vector<std::pair<double, double>> errs;
  for (std::size_t i = 0; i < c.eps.size(); ++i)
    errs.emplace_back(c.eps[i], results[i].sup_err);
  const std::vector<double> orders = convergence_table(errs);

  CsvTable t;
  t.header = {"eps", "sup_err", "order"};
  for (std::size_t i = 0; i < c.eps.size(); ++i)
    t.rows.push_back({fmt(c.eps[i]), fmt(results[i].sup_err),
                      i == 0 ? "" : fmt(orders[i - 1])});
  const std::string path = art.out_dir + "/converge1d.csv";
  t.write(path);
  art.files.push_back(path);

  double min_order = orders.front();
  for (double o : orders) min_order = std::min(min_order, o);
  art.add("min_order", min_order);
  for (std::size_t i = 0; i < c.eps.size(); ++i) {
    art.add("sup_err_" + fmt(c.eps[i]), results[i].sup_err);
    art.add("sup_residual_" + fmt(c.eps[i]), results[i].sup_res);
  }
}

inline void drive_pde2d(const RunConfig& c, const PhiTable& phi,
                        RunArtifact& art) {
  const double eps = c.eps.front();
  const Grid2D g = Grid2D::square(0.0, 0.0, c.domain, c.grid_n);
  PlaneState s = initial_plane_state(detail::make_shape(c.geometry), eps,
                                     c.beta, g, phi.profile());
  const double budget = PlaneStepper::step_budget_2d(eps, std::min(g.hx, g.hy));
  const double dt = (c.dt > 0.0) ? c.dt : 0.9 * budget;
  PlaneStepper stepper(s, dt);
  const long nsteps = static_cast<long>(std::ceil(c.t_final / dt));
  const long stride = std::max(1L, nsteps / 200);

  CsvTable t;
  t.header = {"t", "E_eps", "F_eps", "lambda", "rho_min", "rho_max",
              "mass_drift", "band_ok"};
  const Energies2D e0 = energies(s);
  double max_drift = 0.0, max_EF = e0.E_eps + e0.F_eps;
  bool band_all = max_principle_check(s).in_band;
  t.rows.push_back({fmt(0.0), fmt(e0.E_eps), fmt(e0.F_eps), fmt(0.0),
                    fmt(max_principle_check(s).rho_min),
                    fmt(max_principle_check(s).rho_max), fmt(0.0),
                    detail::bool_cell(band_all)});
  for (long k = 0; k < nsteps; ++k) {
    const PlaneStepper::StepRecord sr = stepper.step(s, k);
    max_drift = std::max(max_drift, sr.mass_drift);
    if ((k + 1) % stride == 0 || k + 1 == nsteps) {
      const DiagnosticsRecord rec = stepper.diagnostics(s, sr.lambda, sr.mass_drift);
      max_EF = std::max(max_EF, rec.E_eps + rec.F_eps);
      band_all = band_all && rec.band_ok;
      t.rows.push_back({fmt(rec.t), fmt(rec.E_eps), fmt(rec.F_eps),
                        fmt(rec.lambda), fmt(rec.rho_min), fmt(rec.rho_max),
                        fmt(rec.mass_drift), detail::bool_cell(rec.band_ok)});
    }
  }
  const std::string diag_path = art.out_dir + "/pde2d.csv";
  t.write(diag_path);
  art.files.push_back(diag_path);

  CsvTable field;
  field.header = {"x", "y", "rho", "Px", "Py"};
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const std::size_t i = g.idx(ix, iy);
      field.rows.push_back({fmt(g.x(ix)), fmt(g.y(iy)), fmt(s.rho[i]),
                            fmt(s.Px[i]), fmt(s.Py[i])});
    }
  const std::string field_path = art.out_dir + "/field.csv";
  field.write(field_path);
  art.files.push_back(field_path);

  try {
    const FrontCurve contour = extract_contour(s);
    CsvTable ct;
    ct.header = {"x", "y"};
    for (const Vec2& p : contour.nodes)
      ct.rows.push_back({fmt(p.x), fmt(p.y)});
    const std::string cpath = art.out_dir + "/contour.csv";
    ct.write(cpath);
    art.files.push_back(cpath);
    art.add("final_contour_area", enclosed_area(contour));
  } catch (const TopologyError& e) {
    art.add("contour_error", e.what());
  }

  const Energies2D ef = energies(s);
  art.add("max_mass_drift", max_drift);
  art.add("max_EF", max_EF);
  art.add("initial_EF", e0.E_eps + e0.F_eps);
  art.add("final_E", ef.E_eps);
  art.add("final_F", ef.F_eps);
  art.add("band_ok", band_all ? 1.0 : 0.0);
  art.add("dt", dt);
}

inline void drive_front2d(const RunConfig& c, const PhiTable& phi,
                          RunArtifact& art) {
  FrontCurve cur = curvature_and_normals(
      resample_uniform(detail::make_shape(c.geometry), c.geometry.nodes));
  const double cap = 0.1 * min_spacing(cur) * min_spacing(cur);
  const double dt = (c.dt > 0.0) ? c.dt : 0.5 * cap;
  const int nsamples = 50;
  const double delta = c.t_final / nsamples;
  const long m = std::max(1L, static_cast<long>(std::ceil(delta / dt)));
  const double dt_eff = delta / static_cast<double>(m);

  CsvTable t;
  t.header = {"t", "area", "perimeter", "isoperimetric"};
  const double A0 = enclosed_area(cur);
  bool iso_monotone = true;
  double prev_iso = 0.0, max_drift = 0.0;
  for (int k = 0; k <= nsamples; ++k) {
    const double time = delta * k;
    if (k > 0) {
      const auto frames =
          evolve_curve(cur, c.beta, 0.0, delta, dt_eff, phi, 1000000);
      cur = frames.back();
    }
    const double A = enclosed_area(cur);
    const double L = perimeter(cur);
    const double iso = 4.0 * M_PI * A / (L * L);
    if (k > 0 && iso < prev_iso - 1e-8) iso_monotone = false;
    prev_iso = iso;
    max_drift = std::max(max_drift, std::abs(A - A0) / A0);
    t.rows.push_back({fmt(time), fmt(A), fmt(L), fmt(iso)});
  }
  const std::string path = art.out_dir + "/front2d.csv";
  t.write(path);
  art.files.push_back(path);

  CsvTable curve;
  curve.header = {"x", "y"};
  for (const Vec2& p : cur.nodes) curve.rows.push_back({fmt(p.x), fmt(p.y)});
  const std::string cpath = art.out_dir + "/curve.csv";
  curve.write(cpath);
  art.files.push_back(cpath);

  art.add("area_drift_rel", max_drift);
  art.add("iso_monotone", iso_monotone ? 1.0 : 0.0);
  art.add("final_iso", prev_iso);
  art.add("dt", dt_eff);
}

inline void drive_phi_table(const RunConfig& c, const PhiTable& phi,
                            RunArtifact& art) {
  CsvTable t;
  t.header = {"V", "phi"};
  const long n = std::lround((c.phi_vmax - c.phi_vmin) / c.phi_step);
  for (long k = 0; k <= n; ++k) {
    const double V = c.phi_vmin + (c.phi_vmax - c.phi_vmin) *
                                      static_cast<double>(k) / static_cast<double>(n);
    t.rows.push_back({fmt(V), fmt(phi.exact(V))});
  }
  const std::string path = art.out_dir + "/phi_table.csv";
  t.write(path);
  art.files.push_back(path);
  art.add("rows", static_cast<double>(n + 1));
}

/// Shared driver for compare runs; `front_override` (tests only) replaces
/// the PDE-seeded initial curve and must match it within 5 eps.
inline std::vector<std::pair<double, double>> compare_2d(
    const RunConfig& c, const PhiTable& phi,
    const FrontCurve* front_override = nullptr) {
  const double eps = c.eps.front();
  const Grid2D g = Grid2D::square(0.0, 0.0, c.domain, c.grid_n);
  PlaneState s = initial_plane_state(detail::make_shape(c.geometry), eps,
                                     c.beta, g, phi.profile());
  FrontCurve front = extract_contour(s);
  if (front_override) {
    if (hausdorff_distance(front, *front_override) > 5.0 * eps)
      throw ConfigError("compare_2d: supplied front curve does not match the PDE initial contour");
    front = *front_override;
  }
  front = resample_uniform(front, c.geometry.nodes);

  const double dt_pde =
      (c.dt > 0.0) ? c.dt
                   : 0.9 * PlaneStepper::step_budget_2d(eps, std::min(g.hx, g.hy));
  PlaneStepper stepper(s, dt_pde);
  const double cap = 0.1 * min_spacing(front) * min_spacing(front);
  const int nsamples = 10;
  const double delta = c.t_final / nsamples;
  const long mc = std::max(1L, static_cast<long>(std::ceil(delta / (0.5 * cap))));
  const double dt_curve = delta / static_cast<double>(mc);
  const long mp = static_cast<long>(std::ceil(delta / dt_pde));

  std::vector<std::pair<double, double>> series;
  series.emplace_back(0.0, hausdorff_distance(extract_contour(s), front));
  long step_index = 0;
  for (int k = 1; k <= nsamples; ++k) {
    for (long j = 0; j < mp; ++j) stepper.step(s, step_index++);
    // the PDE clock leads by at most one step; evolve the curve to the same time
    const double t_pde = s.t;
    const auto frames = evolve_curve(front, c.beta, 0.0, delta, dt_curve, phi, 1000000);
    front = frames.back();
    try {
      series.emplace_back(t_pde, hausdorff_distance(extract_contour(s), front));
    } catch (const TopologyError& e) {
      throw TopologyError(std::string(e.what()) + " at t = " + fmt(t_pde), e.detail);
    }
  }
  return series;
}

inline void drive_compare2d(const RunConfig& c, const PhiTable& phi,
                            RunArtifact& art) {
  const auto series = compare_2d(c, phi);
  CsvTable t;
  t.header = {"t", "hausdorff"};
  double worst = 0.0;
  for (const auto& [time, d] : series) {
    t.rows.push_back({fmt(time), fmt(d)});
    worst = std::max(worst, d);
  }
  const std::string path = art.out_dir + "/compare2d.csv";
  t.write(path);
  art.files.push_back(path);
  art.add("max_hausdorff", worst);
}

inline void drive_expansion_defect(const RunConfig& c, const PhiTable& phi,
                                   RunArtifact& art) {
  const TimeSeries F = c.forcing.series();
  std::vector<double> tg(21);
  for (int k = 0; k < 21; ++k) tg[k] = c.t_final * k / 20.0;

  CsvTable t;
  t.header = {"order", "eps", "defect_rho", "defect_P"};
  std::vector<std::vector<double>> defect(static_cast<std::size_t>(c.order) + 1);
  for (int N = 0; N <= c.order; ++N) {
    const ExpansionSet e = build_expansion(N, F, c.beta, tg, phi);
    for (double eps : c.eps) {
      const DefectNorms d = defect_norm(e, eps, F, c.beta);
      defect[N].push_back(d.defect_rho);
      t.rows.push_back({std::to_string(N), fmt(eps), fmt(d.defect_rho),
                        fmt(d.defect_P)});
    }
  }
  const std::string path = art.out_dir + "/defect.csv";
  t.write(path);
  art.files.push_back(path);

  for (int N = 0; N <= c.order; ++N) {
    if (c.eps.size() >= 2) {
      const double slope = std::log(defect[N].front() / defect[N].back()) /
                           std::log(c.eps.front() / c.eps.back());
      art.add("slope_order" + std::to_string(N), slope);
    }
  }
  if (c.order >= 1) {
    bool below = true;
    for (std::size_t i = 0; i < c.eps.size(); ++i)
      below = below && defect[1][i] < defect[0][i];
    art.add("order1_below_order0", below ? 1.0 : 0.0);
  }
}

namespace detail {

inline const char* plot_script(RunMode m) {
  switch (m) {
    case RunMode::front1d:
      return "import pandas as pd, matplotlib.pyplot as plt\n"
             "d = pd.read_csv('front1d.csv')\n"
             "fig, ax = plt.subplots(2, 1, sharex=True)\n"
             "ax[0].plot(d.t, d.x0); ax[0].set_ylabel('x0')\n"
             "ax[1].plot(d.t, d.v); ax[1].set_ylabel('v'); ax[1].set_xlabel('t')\n"
             "plt.savefig('front1d.png', dpi=150)\n";
    case RunMode::pde1d:
      return "import pandas as pd, matplotlib.pyplot as plt\n"
             "d = pd.read_csv('pde1d.csv')\n"
             "fig, ax = plt.subplots(2, 1, sharex=True)\n"
             "ax[0].plot(d.t, d.x_front); ax[0].set_ylabel('x_front')\n"
             "ax[1].plot(d.t, d.residual_norm); ax[1].set_ylabel('residual')\n"
             "plt.savefig('pde1d.png', dpi=150)\n";
    case RunMode::converge1d:
      return "import pandas as pd, matplotlib.pyplot as plt\n"
             "d = pd.read_csv('converge1d.csv')\n"
             "plt.loglog(d.eps, d.sup_err, 'o-')\n"
             "plt.xlabel('eps'); plt.ylabel('sup |x_eps - x_0|')\n"
             "plt.savefig('converge1d.png', dpi=150)\n";
    case RunMode::pde2d:
      return "import pandas as pd, matplotlib.pyplot as plt\n"
             "d = pd.read_csv('pde2d.csv')\n"
             "fig, ax = plt.subplots(3, 1, sharex=True)\n"
             "ax[0].plot(d.t, d.E_eps + d.F_eps); ax[0].set_ylabel('E+F')\n"
             "ax[1].plot(d.t, d['lambda']); ax[1].set_ylabel('lambda')\n"
             "ax[2].plot(d.t, d.mass_drift); ax[2].set_ylabel('mass drift')\n"
             "plt.savefig('pde2d.png', dpi=150)\n";
    case RunMode::front2d:
      return "import pandas as pd, matplotlib.pyplot as plt\n"
             "d = pd.read_csv('front2d.csv')\n"
             "c = pd.read_csv('curve.csv')\n"
             "fig, ax = plt.subplots(1, 2)\n"
             "ax[0].plot(d.t, d.isoperimetric); ax[0].set_xlabel('t')\n"
             "ax[1].plot(c.x, c.y); ax[1].set_aspect('equal')\n"
             "plt.savefig('front2d.png', dpi=150)\n";
    case RunMode::phi_table:
      return "import pandas as pd, matplotlib.pyplot as plt\n"
             "d = pd.read_csv('phi_table.csv')\n"
             "plt.plot(d.V, d.phi)\n"
             "plt.xlabel('V'); plt.ylabel('Phi(V)')\n"
             "plt.savefig('phi_table.png', dpi=150)\n";
    case RunMode::compare2d:
      return "import pandas as pd, matplotlib.pyplot as plt\n"
             "d = pd.read_csv('compare2d.csv')\n"
             "plt.plot(d.t, d.hausdorff, 'o-')\n"
             "plt.xlabel('t'); plt.ylabel('Hausdorff distance')\n"
             "plt.savefig('compare2d.png', dpi=150)\n";
    case RunMode::expansion_defect:
      return "import pandas as pd, matplotlib.pyplot as plt\n"
             "d = pd.read_csv('defect.csv')\n"
             "for N, grp in d.groupby('order'):\n"
             "    plt.loglog(grp.eps, grp.defect_rho, 'o-', label=f'order {N}')\n"
             "plt.xlabel('eps'); plt.ylabel('defect'); plt.legend()\n"
             "plt.savefig('defect.png', dpi=150)\n";
  }
  return "";
}

}  // namespace detail

/// Execute a run: dispatch on the mode, write every artifact under the
/// output directory and return the summary.  Failures are recorded in the
/// manifest before the error propagates.
inline RunArtifact run(const RunConfig& config) {
  namespace fs = std::filesystem;
  RunArtifact art;
  art.out_dir = config.out_dir;
  fs::create_directories(config.out_dir);

  const auto t_start = std::chrono::steady_clock::now();
  std::string status = "ok", error_text;
  try {
    const ProfileTable profile = build_profile(config.profile_L, config.profile_h);
    const PhiTable phi(profile);
    switch (config.mode) {
      case RunMode::front1d: drive_front1d(config, phi, art); break;
      case RunMode::pde1d: drive_pde1d(config, phi, art); break;
      case RunMode::converge1d: drive_converge1d(config, phi, art); break;
      case RunMode::pde2d: drive_pde2d(config, phi, art); break;
      case RunMode::front2d: drive_front2d(config, phi, art); break;
      case RunMode::phi_table: drive_phi_table(config, phi, art); break;
      case RunMode::compare2d: drive_compare2d(config, phi, art); break;
      case RunMode::expansion_defect: drive_expansion_defect(config, phi, art); break;
    }
  } catch (const Error& e) {
    status = "error";
    error_text = e.what();
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();

  {
    std::ofstream plot(config.out_dir + "/plot.py", std::ios::binary);
    plot << detail::plot_script(config.mode);
  }
  {
    std::ofstream mf(config.out_dir + "/manifest.txt", std::ios::binary);
    mf << manifest_text(config);
    mf << "[result]\n";
    mf << "version = " << kVersion << "\n";
    mf << "status = " << status << "\n";
    if (!error_text.empty()) {
      std::string one_line = error_text;
      for (char& ch : one_line)
        if (ch == '\n') ch = ';';
      mf << "error = " << one_line << "\n";
    }
    for (const auto& [k, v] : art.summary) mf << k << " = " << v << "\n";
    mf << "wall_time_s = " << fmt(wall) << "\n";
  }
  if (status != "ok") throw Error("run failed: " + error_text);
  return art;
}

}  // namespace motility::harness
