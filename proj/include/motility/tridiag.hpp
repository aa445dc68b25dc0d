#pragma once

#include <cstddef>
#include <vector>

#include "motility/errors.hpp"

namespace motility {

/// Thomas algorithm for a general tridiagonal system.
///   lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]
/// lower[0] and upper[n-1] are ignored.  No pivoting; intended for the
/// diagonally dominant or near-definite systems assembled in this library.
inline std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                             const std::vector<double>& diag,
                                             const std::vector<double>& upper,
                                             const std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n), x(n);
  double piv = diag[0];
  if (piv == 0.0) throw Error("solve_tridiagonal: zero pivot at row 0");
  c[0] = upper[0] / piv;
  x[0] = rhs[0] / piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = diag[i] - lower[i] * c[i - 1];
    if (piv == 0.0) throw Error("solve_tridiagonal: zero pivot");
    c[i] = upper[i] / piv;
    x[i] = (rhs[i] - lower[i] * x[i - 1]) / piv;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

/// Prefactored constant-coefficient tridiagonal solver:
///   a x[i-1] + b_j x[i] + c x[i+1]
/// where the diagonal may carry per-row values but the factorization is
/// reused across many right-hand sides (the PDE steppers solve thousands of
/// identical rows per step).
class TridiagLU {
 public:
  TridiagLU() = default;

  TridiagLU(std::vector<double> lower, const std::vector<double>& diag,
            std::vector<double> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    const std::size_t n = diag.size();
    cprime_.resize(n);
    inv_piv_.resize(n);
    double piv = diag[0];
    inv_piv_[0] = 1.0 / piv;
    cprime_[0] = upper_[0] * inv_piv_[0];
    for (std::size_t i = 1; i < n; ++i) {
      piv = diag[i] - lower_[i] * cprime_[i - 1];
      inv_piv_[i] = 1.0 / piv;
      cprime_[i] = upper_[i] * inv_piv_[i];
    }
  }

  std::size_t size() const { return cprime_.size(); }

  /// Solve into `x` (may alias rhs).  Strided access allows column sweeps of
  /// a row-major 2D array without gather buffers.
  void solve(const double* rhs, std::ptrdiff_t rstride, double* x,
             std::ptrdiff_t xstride) const {
    const std::size_t n = cprime_.size();
    x[0] = rhs[0] * inv_piv_[0];
    for (std::size_t i = 1; i < n; ++i)
      x[i * xstride] =
          (rhs[i * rstride] - lower_[i] * x[(i - 1) * xstride]) * inv_piv_[i];
    for (std::size_t i = n - 1; i-- > 0;)
      x[i * xstride] -= cprime_[i] * x[(i + 1) * xstride];
  }

  std::vector<double> solve(const std::vector<double>& rhs) const {
    std::vector<double> x(rhs.size());
    solve(rhs.data(), 1, x.data(), 1);
    return x;
  }

  /// Solve `nsys` interleaved systems in place: element j of system s lives
  /// at f[j * step_stride + s].  Sweeping the recurrence index outermost
  /// keeps every inner loop contiguous, which is what makes the column
  /// sweeps of a row-major 2D field cache friendly.
  void solve_interleaved(double* f, std::size_t nsys,
                         std::ptrdiff_t step_stride) const {
    const std::size_t n = cprime_.size();
    for (std::size_t s = 0; s < nsys; ++s) f[s] *= inv_piv_[0];
    for (std::size_t j = 1; j < n; ++j) {
      double* row = f + j * step_stride;
      const double* prev = f + (j - 1) * step_stride;
      const double lo = lower_[j], ip = inv_piv_[j];
      for (std::size_t s = 0; s < nsys; ++s)
        row[s] = (row[s] - lo * prev[s]) * ip;
    }
    for (std::size_t j = n - 1; j-- > 0;) {
      double* row = f + j * step_stride;
      const double* next = f + (j + 1) * step_stride;
      const double cp = cprime_[j];
      for (std::size_t s = 0; s < nsys; ++s) row[s] -= cp * next[s];
    }
  }

 private:
  std::vector<double> lower_, upper_, cprime_, inv_piv_;
};

/// Cyclic tridiagonal solve (Sherman-Morrison), used by the periodic spline.
/// `corner_lo` is the (0, n-1) entry and `corner_hi` the (n-1, 0) entry.
inline std::vector<double> solve_cyclic_tridiagonal(
    const std::vector<double>& lower, const std::vector<double>& diag,
    const std::vector<double>& upper, double corner_lo, double corner_hi,
    const std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  if (n < 3) throw Error("solve_cyclic_tridiagonal: need at least 3 unknowns");
  const double gamma = -diag[0];
  std::vector<double> d = diag;
  d[0] -= gamma;
  d[n - 1] -= corner_lo * corner_hi / gamma;
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = corner_lo;
  std::vector<double> x = solve_tridiagonal(lower, d, upper, rhs);
  std::vector<double> z = solve_tridiagonal(lower, d, upper, u);
  const double vx = x[0] + corner_hi / gamma * x[n - 1];
  const double vz = 1.0 + z[0] + corner_hi / gamma * z[n - 1];
  const double factor = vx / vz;
  for (std::size_t i = 0; i < n; ++i) x[i] -= factor * z[i];
  return x;
}

}  // namespace motility
