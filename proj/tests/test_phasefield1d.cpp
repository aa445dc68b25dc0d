#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "motility/front_law.hpp"
#include "motility/phasefield1d.hpp"

using namespace motility;

namespace {

const PhiTable& shared_phi() {
  static const PhiTable phi(build_profile(40.0, 0.01));
  return phi;
}

struct RunResult {
  std::vector<double> t, x;
  LineState final_state;
  bool band_ok = true;
};

RunResult run_front(double eps, double beta, const TimeSeries& F, double T,
                    int N, double safety = 1.0) {
  const double span = 30.0 * eps * std::max(1.0, T * 0.5);
  GridSpec1D g{-span, span, static_cast<std::size_t>(2 * span / (eps / 10.0)) + 1};
  LineState s = init_well_prepared(eps, beta, 0.0, N, F, g, shared_phi());
  const double dt = safety * step_budget_1d(eps, s.hx);
  LineStepper stepper(s, dt);
  const long nsteps = static_cast<long>(std::ceil(T / dt));
  RunResult r;
  const long stride = std::max(1L, nsteps / 100);
  r.t.push_back(0.0);
  r.x.push_back(extract_front(s));
  for (long k = 0; k < nsteps; ++k) {
    stepper.step(s, F(s.t), k);
    if ((k + 1) % stride == 0 || k + 1 == nsteps) {
      r.t.push_back(s.t);
      r.x.push_back(extract_front(s));
      r.band_ok = r.band_ok && band_check(s).in_band;
    }
  }
  r.final_state = s;
  return r;
}

}  // namespace

TEST_CASE("well-prepared initial data", "[pde1d]") {
  const PhiTable& phi = shared_phi();
  const auto zero = [](double) { return 0.0; };

  SECTION("order 0 at beta 0 is the pure profile") {
    GridSpec1D g{-2.0, 2.0, 801};
    const LineState s = init_well_prepared(0.05, 0.0, 0.3, 0, zero, g, phi);
    for (std::size_t j = 0; j < s.size(); ++j) {
      CHECK(s.rho[j] ==
            Catch::Approx(ProfileTable::theta0_at((s.x(j) - 0.3) / 0.05)).margin(1e-14));
      CHECK(s.P[j] == 0.0);
    }
    CHECK(extract_front(s) == Catch::Approx(0.3).margin(s.hx));
  }

  SECTION("order 1 correction is orthogonal to the profile direction") {
    const double eps = 0.05;
    GridSpec1D g{-2.0, 2.0, 801};
    const auto F = [](double t) { return 0.02 * std::sin(t) + 0.01; };
    const LineState s = init_well_prepared(eps, 0.1, 0.0, 1, F, g, phi);
    double proj = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double y = s.x(j) / eps;
      proj += (s.rho[j] - ProfileTable::theta0_at(y)) *
              ProfileTable::dtheta0_at(y) * s.hx;
    }
    CHECK(std::abs(proj) <= eps * eps);
    CHECK(extract_front(s) == Catch::Approx(0.0).margin(s.hx));
  }

  SECTION("configuration guards") {
    CHECK_THROWS_AS(init_well_prepared(0.05, 0.0, 0.0, 0, zero,
                                       GridSpec1D{-2.0, 2.0, 101}, phi),
                    ConfigError);  // too coarse
    CHECK_THROWS_AS(init_well_prepared(0.05, 0.0, 1.95, 0, zero,
                                       GridSpec1D{-2.0, 2.0, 801}, phi),
                    ConfigError);  // margin below 20 eps
  }
}

TEST_CASE("front extraction", "[pde1d]") {
  LineState s;
  s.x_lo = 0.0;
  s.hx = 0.1;
  s.eps = 0.05;
  s.rho = {0.0, 0.2, 0.4, 0.6, 0.9, 1.0};

  SECTION("piecewise-linear crossing is exact") {
    // crossing between nodes 2 and 3: 0.4 + t (0.6 - 0.4) = 0.5 at t = 1/2
    CHECK(extract_front(s) == Catch::Approx(0.25).margin(1e-14));
  }

  SECTION("flat states lose the front") {
    LineState flat = s;
    flat.rho.assign(6, 0.4);
    CHECK_THROWS_AS(extract_front(flat), FrontLostError);
  }

  SECTION("steepest crossing wins") {
    LineState multi = s;
    multi.rho = {0.0, 0.45, 0.55, 0.45, 0.0, 1.0};  // shallow wiggle + steep jump
    CHECK(extract_front(multi) == Catch::Approx(multi.x(4) + 0.05).margin(1e-12));
  }
}

TEST_CASE("semi-implicit stepping", "[pde1d]") {
  const PhiTable& phi = shared_phi();
  const auto zero = [](double) { return 0.0; };

  SECTION("standing wave barely moves") {
    const RunResult r = run_front(0.05, 0.0, zero, 1.0, 0);
    CHECK(std::abs(r.x.back() - r.x.front()) <= 1e-3);
    CHECK(r.band_ok);
  }

  SECTION("unforced uncoupled P stays identically zero") {
    const RunResult r = run_front(0.05, 0.0, zero, 0.05, 0);
    for (double p : r.final_state.P) CHECK(std::abs(p) <= 1e-14);
  }

  SECTION("stability budget is enforced") {
    GridSpec1D g{-1.0, 1.0, 501};
    const LineState s = init_well_prepared(0.05, 0.0, 0.0, 0, zero, g, phi);
    CHECK_THROWS_AS(LineStepper(s, 10.0 * step_budget_1d(0.05, s.hx)), ConfigError);
  }

  SECTION("first-order self convergence in dt") {
    const double eps = 0.05;
    const auto F = [](double t) { return 0.02 * std::sin(3.0 * t) + 0.01; };
    auto final_x = [&](double safety) {
      return run_front(eps, 0.1, F, 0.25, 0, safety).x.back();
    };
    const double x1 = final_x(1.0), x2 = final_x(0.5), x4 = final_x(0.25);
    const double ratio = (x1 - x2) / (x2 - x4);
    CAPTURE(x1, x2, x4, ratio);
    CHECK(ratio >= 1.4);
    CHECK(ratio <= 2.8);
  }

  SECTION("determinism: identical runs are bit identical") {
    const auto F = [](double t) { return 0.02 * std::sin(t); };
    const RunResult a = run_front(0.05, 0.1, F, 0.05, 1);
    const RunResult b = run_front(0.05, 0.1, F, 0.05, 1);
    REQUIRE(a.final_state.size() == b.final_state.size());
    for (std::size_t j = 0; j < a.final_state.size(); ++j) {
      CHECK(a.final_state.rho[j] == b.final_state.rho[j]);
      CHECK(a.final_state.P[j] == b.final_state.P[j]);
    }
  }

  SECTION("beta continuity of trajectories") {
    const auto F = [](double t) { return 0.02 * std::sin(t) + 0.01; };
    const RunResult a = run_front(0.05, 0.1, F, 0.5, 1);
    const RunResult b = run_front(0.05, 0.101, F, 0.5, 1);
    double sup = 0.0;
    for (std::size_t k = 0; k < a.x.size(); ++k)
      sup = std::max(sup, std::abs(a.x[k] - b.x[k]));
    CAPTURE(sup);
    CHECK(sup <= 2e-2);
  }
}

TEST_CASE("first-order residual of the ansatz", "[pde1d]") {
  const PhiTable& phi = shared_phi();
  const ProfileTable& prof = phi.profile();
  const double eps = 0.05;
  GridSpec1D g{-2.0, 2.0, 801};

  SECTION("fresh order-0 state: residual is extraction noise") {
    const LineState s =
        init_well_prepared(eps, 0.0, 0.0, 0, [](double) { return 0.0; }, g, phi);
    const Residual1D r = residual_profile(s, prof);
    CHECK(r.norm <= s.hx / eps);
  }

  SECTION("fresh order-1 state: residual norm is the first correction") {
    const auto F = [](double t) { return 0.02 * std::sin(t) + 0.01; };
    const LineState s = init_well_prepared(eps, 0.1, 0.0, 1, F, g, phi);
    const Residual1D r = residual_profile(s, prof);
    // reference: L2(dx) norm of theta1 at t = 0
    const ExpansionSet e =
        build_expansion(1, F, 0.1, std::vector<double>{0.0, 1e-3, 2e-3}, phi);
    const double ref = std::sqrt(eps * inner(e.theta[0][0], e.theta[0][0]));
    CAPTURE(r.norm, ref);
    CHECK(r.norm == Catch::Approx(ref).epsilon(10.0 * eps));
  }

  SECTION("flat state propagates the front loss") {
    LineState flat;
    flat.x_lo = 0.0;
    flat.hx = 0.01;
    flat.eps = eps;
    flat.rho.assign(64, 0.4);
    flat.P.assign(64, 0.0);
    CHECK_THROWS_AS(residual_profile(flat, prof), FrontLostError);
  }
}
