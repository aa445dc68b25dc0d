// Command-line front end: batch experiment runner for the coupled
// phase-field motility model, its sharp-interface laws and the
// verification harness.

#include <CLI11.hpp>

#include <sstream>

#include <cstdio>
#include <random>

#include "motility/expansion.hpp"
#include "motility/front_law.hpp"
#include "motility/harness/run.hpp"
#include "motility/inequalities.hpp"
#include "motility/version.hpp"

namespace {

using namespace motility;
namespace hn = motility::harness;

int run_mode(const std::string& config_path, const std::string& out_override,
             int jobs_override, long seed_override,
             std::optional<hn::RunMode> forced_mode) {
  hn::RunConfig cfg = hn::load_config(config_path);
  if (forced_mode && cfg.mode != *forced_mode) {
    // re-validate under the forced mode (mode-dependent rules differ)
    cfg.mode = *forced_mode;
    std::istringstream echo(hn::manifest_text(cfg));
    cfg = hn::make_config(hn::parse_ini(echo));
  }
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (jobs_override > 0) cfg.jobs = jobs_override;
  if (seed_override >= 0) cfg.seed = static_cast<unsigned long>(seed_override);

  const hn::RunArtifact art = hn::run(cfg);
  std::printf("run complete: %s\n", art.out_dir.c_str());
  for (const auto& [k, v] : art.summary)
    std::printf("  %s = %s\n", k.c_str(), v.c_str());
  return 0;
}

int self_check(unsigned long seed) {
  int failures = 0;
  auto report = [&](const char* name, bool ok, double value) {
    std::printf("[%s] %-40s (%.3e)\n", ok ? "PASS" : "FAIL", name, value);
    if (!ok) ++failures;
  };

  const ProfileTable p = build_profile(40.0, 0.01);
  report("profile ODE residual <= 10 h^2", p.max_ode_residual() <= 1e-3,
         p.max_ode_residual());
  report("total rise = 1", std::abs(p.total_rise - 1.0) <= 1e-8,
         std::abs(p.total_rise - 1.0));
  const double c0_ref = 0.11785113019775792;
  report("c0 matches equipartition", std::abs(p.c0 - c0_ref) <= 1e-6,
         std::abs(p.c0 - c0_ref));

  // weighted inequalities on seeded smooth samples
  std::mt19937_64 rng(seed);
  const double cF = friedrichs_constant(p);
  double worst_friedrichs = 0.0, worst_poincare = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    LineField v(p.grid);
    std::uniform_real_distribution<double> amp(-1.0, 1.0), ctr(-8.0, 8.0),
        wid(1.5, 5.0);
    const double a0 = amp(rng), c0g = ctr(rng), w0 = wid(rng);
    const double a1 = amp(rng), c1g = ctr(rng), w1 = wid(rng);
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double y = p.grid.y(j);
      v.v[j] = a0 * std::exp(-0.5 * std::pow((y - c0g) / w0, 2)) +
               a1 * std::exp(-0.5 * std::pow((y - c1g) / w1, 2));
    }
    const InequalityReport r = check_weighted_inequalities(v, p);
    worst_friedrichs = std::max(worst_friedrichs, r.friedrichs.ratio);
    worst_poincare = std::max(worst_poincare, r.poincare.ratio);
  }
  report("Friedrichs ratio <= c_env^4/kappa_env^2", worst_friedrichs <= cF,
         worst_friedrichs);
  report("Poincare ratio <= 1.1 c_F", worst_poincare <= 1.1 * cF,
         worst_poincare);

  // velocity law consistency across the two solvers
  const PhiTable phi(p);
  double worst_gap = 0.0;
  std::uniform_real_distribution<double> Fd(-0.1, 0.1), Bd(-0.3, 0.3);
  for (int k = 0; k < 10; ++k) {
    const double F = Fd(rng), beta = Bd(rng);
    const double gap =
        std::abs(solve_v0(F, beta, phi) + solve_velocity_1d(F, beta, phi).V);
    worst_gap = std::max(worst_gap, gap);
  }
  report("velocity solves agree to 1e-9", worst_gap <= 1e-9, worst_gap);

  // curve machinery sanity
  const FrontCurve circle = curvature_and_normals(make_circle({0, 0}, 2.0, 256));
  double kerr = 0.0;
  for (double k : circle.kappa) kerr = std::max(kerr, std::abs(k - 0.5));
  report("circle curvature = 1/R", kerr <= 1e-4, kerr);
  report("turning number = 2 pi",
         std::abs(total_turning(circle) - 2.0 * M_PI) <= 1e-6,
         std::abs(total_turning(circle) - 2.0 * M_PI));

  std::printf(failures == 0 ? "all checks passed\n"
                            : "%d check(s) failed\n",
              failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phase-field cell motility lab"};
  app.set_version_flag("--version", motility::kVersion);
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int jobs = 0;
  long seed = -1;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config_path, "run configuration file");
    if (needs_config) opt->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--jobs", jobs, "parallel workers for sweep modes");
    sub->add_option("--seed", seed, "seed override");
  };

  CLI::App* cmd_run = app.add_subcommand("run", "execute the mode named in the config");
  CLI::App* cmd_conv = app.add_subcommand("converge", "1D sharp-interface convergence study");
  CLI::App* cmd_cmp = app.add_subcommand("compare", "PDE contour vs curve-flow comparison");
  CLI::App* cmd_phi = app.add_subcommand("phi-table", "tabulate the interface response Phi(V)");
  CLI::App* cmd_check = app.add_subcommand("check", "run the built-in property suites");
  add_common(cmd_run, true);
  add_common(cmd_conv, true);
  add_common(cmd_cmp, true);
  add_common(cmd_phi, true);
  add_common(cmd_check, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_check->parsed())
      return self_check(seed >= 0 ? static_cast<unsigned long>(seed) : 20250810UL);
    std::optional<hn::RunMode> forced;
    if (cmd_conv->parsed()) forced = hn::RunMode::converge1d;
    if (cmd_cmp->parsed()) forced = hn::RunMode::compare2d;
    if (cmd_phi->parsed()) forced = hn::RunMode::phi_table;
    return run_mode(config_path, out_dir, jobs, seed, forced);
  } catch (const motility::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
