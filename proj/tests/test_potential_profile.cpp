#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "motility/potential.hpp"
#include "motility/profile.hpp"
#include "motility/linearized_ac.hpp"

using namespace motility;

namespace {
constexpr double kSqrt2Over12 = 0.11785113019775792;  // int (theta0')^2 dy
constexpr double kSqrt2Over8 = 0.17677669529663688;   // theta0'(0)

// independent equipartition oracle: int_0^1 sqrt(2 W) d(theta) by composite
// Simpson on a fine grid
double c0_equipartition_oracle() {
  const int n = 200000;
  const double h = 1.0 / n;
  double s = 0.0;
  auto f = [](double t) { return std::sqrt(2.0 * DoubleWell::w(t)); };
  for (int i = 0; i < n; i += 2)
    s += f(i * h) + 4.0 * f((i + 1) * h) + f((i + 2) * h);
  return s * h / 3.0;
}
}  // namespace

TEST_CASE("double well values and derivatives", "[profiles]") {
  CHECK(potential_eval(0.0, 0) == 0.0);
  CHECK(potential_eval(1.0, 0) == 0.0);
  CHECK(potential_eval(0.5, 0) == Catch::Approx(1.0 / 64.0).margin(1e-16));
  CHECK(potential_eval(0.25, 1) == Catch::Approx(0.046875).margin(1e-16));
  CHECK(potential_eval(0.0, 1) == 0.0);
  CHECK(potential_eval(1.0, 1) == 0.0);
  CHECK(potential_eval(0.5, 1) == 0.0);

  // factored form of W'
  for (double r : {-0.4, 0.1, 0.33, 0.77, 1.3})
    CHECK(potential_eval(r, 1) ==
          Catch::Approx(0.5 * r * (1 - r) * (1 - 2 * r)).margin(1e-15));

  // W'''' is the constant 6; cross-check against finite differences of W'''
  for (double r : {-0.5, 0.0, 0.4, 1.0, 1.7}) {
    CHECK(potential_eval(r, 4) == 6.0);
    const double fd =
        (potential_eval(r + 1e-4, 3) - potential_eval(r - 1e-4, 3)) / 2e-4;
    CHECK(fd == Catch::Approx(6.0).margin(1e-6));
  }

  SECTION("W >= 0 on [-1, 2] and wells at 0, 1") {
    for (int i = 0; i <= 300; ++i) {
      const double r = -1.0 + 0.01 * i;
      CHECK(potential_eval(r, 0) >= 0.0);
    }
  }
  SECTION("(W')^2 <= 6 W on [0, 1]") {
    for (int i = 0; i <= 100; ++i) {
      const double r = 0.01 * i;
      const double wp = potential_eval(r, 1);
      CHECK(wp * wp <= 6.0 * potential_eval(r, 0) + 1e-15);
    }
  }
  SECTION("invalid order") {
    CHECK_THROWS_AS(potential_eval(0.5, 5), DomainError);
    CHECK_THROWS_AS(potential_eval(0.5, -1), DomainError);
  }
}

TEST_CASE("standing wave table", "[profiles]") {
  const double h = 0.01;
  const ProfileTable p = build_profile(40.0, h);

  SECTION("configuration guards") {
    CHECK_THROWS_AS(build_profile(30.0, 0.01), ConfigError);
    CHECK_THROWS_AS(build_profile(40.0, 0.2), ConfigError);
  }

  SECTION("normalization and limits") {
    CHECK(p.theta0[p.grid.index_of_zero()] == 0.5);
    CHECK(p.theta0.front() < 1e-6);
    CHECK(p.theta0.back() > 1.0 - 1e-6);
    for (std::size_t j = 1; j < p.size(); ++j)
      CHECK(p.theta0[j] >= p.theta0[j - 1]);
  }

  SECTION("rise and slope at the midpoint") {
    CHECK(p.total_rise == Catch::Approx(1.0).margin(1e-8));
    CHECK(p.dtheta0[p.grid.index_of_zero()] ==
          Catch::Approx(kSqrt2Over8).margin(1e-6));
  }

  SECTION("c0 against the equipartition oracle") {
    CHECK(p.c0 == Catch::Approx(kSqrt2Over12).margin(1e-6));
    CHECK(p.c0 == Catch::Approx(c0_equipartition_oracle()).margin(1e-6));
  }

  SECTION("pointwise ODE residual") {
    CHECK(p.max_ode_residual() <= 10.0 * h * h);
  }

  SECTION("kernel of the linearized operator") {
    const LineField r = linearized_ac_apply(p.dtheta0_field(), p);
    CHECK(max_abs(r) <= 10.0 * h * h);
  }

  SECTION("exponential envelope holds at every node") {
    CHECK(p.kappa_env > 0.0);
    CHECK(p.c_env > 1.0);
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double w = p.dtheta0[j] * p.dtheta0[j];
      const double env = std::exp(-p.kappa_env * std::abs(p.grid.y(j)));
      CHECK(w > env / p.c_env);
      CHECK(w <= p.c_env * env);
    }
    // fitted rate should sit near the true decay sqrt(2) of (theta0')^2
    CHECK(p.kappa_env == Catch::Approx(std::sqrt(2.0)).epsilon(0.1));
  }

  SECTION("quadrature consistency under refinement") {
    const double c1 = build_profile(40.0, h).c0;
    const double c2 = build_profile(40.0, h / 2).c0;
    const double c3 = build_profile(40.0, h / 4).c0;
    // The trapezoid sums of the analytic integrand converge faster than
    // second order (the Euler-Maclaurin boundary terms vanish), so both
    // differences sit at rounding level; the floor keeps the ratio test
    // meaningful in that regime.
    CHECK(std::abs(c1 - c2) <= std::max(4.0 * std::abs(c2 - c3), 5e-14));
  }
}
