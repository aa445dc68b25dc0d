#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "motility/errors.hpp"

namespace motility {

/// Symmetric uniform grid y_j = (j - m) h, j = 0..2m, covering [-L, L] with
/// L = m h.  Node m sits exactly at y = 0.
struct SymmetricGrid {
  long m = 0;
  double h = 0.0;

  SymmetricGrid() = default;
  SymmetricGrid(long m_in, double h_in) : m(m_in), h(h_in) {}

  /// Grid whose half-width is at least `half_width` (rounded up to a whole
  /// number of cells).
  static SymmetricGrid with_half_width(double half_width, double h) {
    return SymmetricGrid(static_cast<long>(std::ceil(half_width / h - 1e-12)), h);
  }

  std::size_t size() const { return static_cast<std::size_t>(2 * m + 1); }
  double half_width() const { return m * h; }
  double y(std::size_t j) const { return (static_cast<long>(j) - m) * h; }
  std::size_t index_of_zero() const { return static_cast<std::size_t>(m); }

  bool operator==(const SymmetricGrid& o) const { return m == o.m && h == o.h; }
  bool operator!=(const SymmetricGrid& o) const { return !(*this == o); }
};

/// Real-valued function sampled on a SymmetricGrid.
struct LineField {
  SymmetricGrid grid;
  std::vector<double> v;

  LineField() = default;
  explicit LineField(const SymmetricGrid& g, double fill = 0.0)
      : grid(g), v(g.size(), fill) {}

  std::size_t size() const { return v.size(); }
  double& operator[](std::size_t j) { return v[j]; }
  double operator[](std::size_t j) const { return v[j]; }
};

inline void require_same_grid(const SymmetricGrid& a, const SymmetricGrid& b,
                              const char* what) {
  if (a != b)
    throw GridMismatchError(std::string(what) + ": operands live on different grids");
}

/// Trapezoidal quadrature of a sampled function.
inline double trapz(const LineField& f) {
  double s = 0.0, c = 0.0;  // Kahan
  for (double x : f.v) {
    const double t = x - c;
    const double u = s + t;
    c = (u - s) - t;
    s = u;
  }
  s -= 0.5 * (f.v.front() + f.v.back());
  return s * f.grid.h;
}

/// Trapezoidal inner product  <a, b> = int a b dy.
inline double inner(const LineField& a, const LineField& b) {
  require_same_grid(a.grid, b.grid, "inner");
  double s = 0.0, c = 0.0;
  const std::size_t n = a.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    const double t = w * a.v[j] * b.v[j] - c;
    const double u = s + t;
    c = (u - s) - t;
    s = u;
  }
  return s * a.grid.h;
}

inline double l2_norm(const LineField& f) {
  return std::sqrt(inner(f, f));
}

inline double max_abs(const LineField& f) {
  double m = 0.0;
  for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

/// Second-order centred first derivative; one-sided second-order stencils at
/// the two end nodes.
inline LineField derivative(const LineField& f) {
  LineField d(f.grid);
  const std::size_t n = f.size();
  const double h = f.grid.h;
  for (std::size_t j = 1; j + 1 < n; ++j)
    d.v[j] = (f.v[j + 1] - f.v[j - 1]) / (2.0 * h);
  d.v[0] = (-3.0 * f.v[0] + 4.0 * f.v[1] - f.v[2]) / (2.0 * h);
  d.v[n - 1] = (3.0 * f.v[n - 1] - 4.0 * f.v[n - 2] + f.v[n - 3]) / (2.0 * h);
  return d;
}

/// Centred second derivative at interior nodes; end nodes use a homogeneous
/// Dirichlet ghost (value 0 beyond the grid).
inline LineField second_derivative_dirichlet(const LineField& f) {
  LineField d(f.grid);
  const std::size_t n = f.size();
  const double ih2 = 1.0 / (f.grid.h * f.grid.h);
  for (std::size_t j = 0; j < n; ++j) {
    const double left = (j == 0) ? 0.0 : f.v[j - 1];
    const double right = (j == n - 1) ? 0.0 : f.v[j + 1];
    d.v[j] = (left - 2.0 * f.v[j] + right) * ih2;
  }
  return d;
}

/// Cubic (Catmull-Rom) interpolation of a sampled field at an arbitrary
/// point.  Outside the grid the end value is returned; fields handled here
/// either decay or approach a constant.
inline double sample(const LineField& f, double y) {
  const SymmetricGrid& g = f.grid;
  const std::size_t n = f.size();
  const double t = (y + g.half_width()) / g.h;
  if (t <= 0.0) return f.v.front();
  if (t >= static_cast<double>(n - 1)) return f.v.back();
  std::size_t j = static_cast<std::size_t>(t);
  if (j + 1 >= n) j = n - 2;
  const double s = t - static_cast<double>(j);
  const double p1 = f.v[j], p2 = f.v[j + 1];
  const double p0 = (j == 0) ? 2.0 * p1 - p2 : f.v[j - 1];
  const double p3 = (j + 2 >= n) ? 2.0 * p2 - p1 : f.v[j + 2];
  const double a = 2.0 * p1;
  const double b = p2 - p0;
  const double c2 = 2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3;
  const double c3 = -p0 + 3.0 * p1 - 3.0 * p2 + p3;
  return 0.5 * (a + b * s + c2 * s * s + c3 * s * s * s);
}

}  // namespace motility
