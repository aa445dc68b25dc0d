#pragma once

#include <cmath>
#include <memory>

#include "motility/grid1d.hpp"
#include "motility/profile.hpp"
#include "motility/psi.hpp"

namespace motility {

/// Interface response function
///
///   Phi(V) = int Psi0(y; -V, beta = 1) (theta0')^2 dy.
///
/// Psi0 is linear in beta, so Phi does not depend on the coupling strength;
/// it is always evaluated with beta = 1.
inline double phi_of_v(double V, const ProfileTable& p) {
  if (!(std::abs(V) <= 5.0))
    throw ConfigError("phi_of_v: |V| <= 5 required, got " + std::to_string(V));
  const PsiProfile psi = solve_psi0(-V, 1.0, p);
  return inner(psi.field(), p.weight_field());
}

/// Tabulated Phi on a uniform V-grid with cubic interpolation.  Velocity
/// root solves scan this table and polish against the exact quadrature, so
/// the table only has to locate sign changes, not carry final accuracy.
/// Holds its own copy of the profile; immutable and freely shareable.
class PhiTable {
 public:
  explicit PhiTable(const ProfileTable& profile, double v_max = 5.0,
                    double dv = 0.01)
      : profile_(profile), weight_(profile.weight_field()) {
    table_.grid = SymmetricGrid::with_half_width(v_max, dv);
    table_.v.resize(table_.grid.size());
    for (std::size_t k = 0; k < table_.grid.size(); ++k)
      table_.v[k] = phi_of_v_cached(table_.grid.y(k));
  }

  const ProfileTable& profile() const { return profile_; }
  double c0() const { return profile_.c0; }
  double v_max() const { return table_.grid.half_width(); }

  /// Interpolated Phi(V).
  double operator()(double V) const { return sample(table_, V); }

  /// Exact Phi(V) through a fresh solve.
  double exact(double V) const { return phi_of_v_cached(V); }

  /// d Phi / dV from the table (adequate for Newton polish).
  double slope(double V) const {
    const double d = 10.0 * table_.grid.h;
    return (sample(table_, V + d) - sample(table_, V - d)) / (2.0 * d);
  }

 private:
  double phi_of_v_cached(double V) const {
    const PsiProfile psi = solve_psi0(-V, 1.0, profile_);
    LineField f(profile_.grid);
    f.v = psi.values;
    return inner(f, weight_);
  }

  ProfileTable profile_;
  LineField weight_;
  LineField table_;
};

}  // namespace motility
