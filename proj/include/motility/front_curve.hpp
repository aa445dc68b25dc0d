#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "motility/errors.hpp"
#include "motility/tridiag.hpp"

#ifndef M_PI
#define M_PI 3.14159265358979323846
#endif

namespace motility {

struct Vec2 {
  double x = 0.0, y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Closed planar polyline, counterclockwise, with optional per-node
/// curvature and inward unit normals (populated by curvature_and_normals).
/// Sign conventions: a circle of radius R has kappa = 1/R, and the inward
/// normal of a counterclockwise curve is the left rotation of the tangent.
struct FrontCurve {
  std::vector<Vec2> nodes;
  std::vector<Vec2> normal;
  std::vector<double> kappa;
  double spacing = 0.0;  // mean arclength spacing

  std::size_t size() const { return nodes.size(); }
  bool has_geometry() const { return kappa.size() == nodes.size() && !nodes.empty(); }
};

inline double signed_area(const FrontCurve& c) {
  double a = 0.0;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = c.nodes[i];
    const Vec2& q = c.nodes[(i + 1) % n];
    a += cross(p, q);
  }
  return 0.5 * a;
}

/// Shoelace area, positive for counterclockwise orientation.
inline double enclosed_area(const FrontCurve& c) { return signed_area(c); }

inline double perimeter(const FrontCurve& c) {
  double s = 0.0;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i)
    s += norm(c.nodes[(i + 1) % n] - c.nodes[i]);
  return s;
}

inline double min_spacing(const FrontCurve& c) {
  double s = std::numeric_limits<double>::infinity();
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i)
    s = std::min(s, norm(c.nodes[(i + 1) % n] - c.nodes[i]));
  return s;
}

/// Discrete total turning angle; 2 pi for a simple counterclockwise curve.
inline double total_turning(const FrontCurve& c) {
  const std::size_t n = c.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = c.nodes[(i + 1) % n] - c.nodes[i];
    const Vec2 e1 = c.nodes[(i + 2) % n] - c.nodes[(i + 1) % n];
    sum += std::atan2(cross(e0, e1), dot(e0, e1));
  }
  return sum;
}

inline void normalize_orientation(FrontCurve& c) {
  if (signed_area(c) < 0.0) {
    std::reverse(c.nodes.begin(), c.nodes.end());
    c.normal.clear();
    c.kappa.clear();
  }
}

namespace detail {

inline bool on_segment(Vec2 p, Vec2 q, Vec2 r) {
  return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) &&
         std::min(p.y, r.y) <= q.y && q.y <= std::max(p.y, r.y);
}

inline bool segments_intersect(Vec2 a1, Vec2 a2, Vec2 b1, Vec2 b2) {
  const double d1 = cross(b2 - b1, a1 - b1);
  const double d2 = cross(b2 - b1, a2 - b1);
  const double d3 = cross(a2 - a1, b1 - a1);
  const double d4 = cross(a2 - a1, b2 - a1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(b1, a1, b2)) return true;
  if (d2 == 0 && on_segment(b1, a2, b2)) return true;
  if (d3 == 0 && on_segment(a1, b1, a2)) return true;
  if (d4 == 0 && on_segment(a1, b2, a2)) return true;
  return false;
}

}  // namespace detail

/// Exact simplicity test with an x-interval sweep; near-linear on smooth
/// curves, O(n^2) worst case.
inline bool is_simple(const FrontCurve& c) {
  const std::size_t n = c.size();
  if (n < 3) return false;
  struct Seg { double xmin, xmax; std::size_t i; };
  std::vector<Seg> segs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = c.nodes[i];
    const Vec2& q = c.nodes[(i + 1) % n];
    segs[i] = {std::min(p.x, q.x), std::max(p.x, q.x), i};
  }
  std::sort(segs.begin(), segs.end(),
            [](const Seg& a, const Seg& b) { return a.xmin < b.xmin; });
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n && segs[b].xmin <= segs[a].xmax; ++b) {
      const std::size_t i = segs[a].i, j = segs[b].i;
      const std::size_t d = (i > j ? i - j : j - i);
      if (d == 0 || d == 1 || d == n - 1) continue;  // shared endpoint
      if (detail::segments_intersect(c.nodes[i], c.nodes[(i + 1) % n],
                                     c.nodes[j], c.nodes[(j + 1) % n]))
        return false;
    }
  }
  return true;
}

namespace detail {

/// Periodic natural-parameter cubic spline through the closed node list.
class PeriodicSpline {
 public:
  explicit PeriodicSpline(const std::vector<Vec2>& pts) : p_(pts) {
    const std::size_t n = pts.size();
    h_.resize(n);
    t_.resize(n + 1);
    t_[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      h_[i] = std::max(norm(pts[(i + 1) % n] - pts[i]), 1e-300);
      t_[i + 1] = t_[i] + h_[i];
    }
    mx_ = second_derivatives([&](std::size_t i) { return p_[i].x; });
    my_ = second_derivatives([&](std::size_t i) { return p_[i].y; });
  }

  double length_parameter() const { return t_.back(); }

  Vec2 eval(double t) const {
    const std::size_t n = p_.size();
    t = std::fmod(t, t_.back());
    if (t < 0) t += t_.back();
    std::size_t i = std::upper_bound(t_.begin(), t_.end(), t) - t_.begin();
    i = (i == 0) ? 0 : i - 1;
    if (i >= n) i = n - 1;
    const double s = t - t_[i];
    const double h = h_[i];
    auto comp = [&](double p0, double p1, double m0, double m1) {
      const double a = (p1 - p0) / h - h * (2.0 * m0 + m1) / 6.0;
      return p0 + s * (a + s * (m0 / 2.0 + s * (m1 - m0) / (6.0 * h)));
    };
    const std::size_t j = (i + 1) % n;
    return {comp(p_[i].x, p_[j].x, mx_[i], mx_[j]),
            comp(p_[i].y, p_[j].y, my_[i], my_[j])};
  }

 private:
  template <typename Get>
  std::vector<double> second_derivatives(Get get) const {
    const std::size_t n = p_.size();
    std::vector<double> lo(n), di(n), up(n), rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t im = (i + n - 1) % n;
      const double hm = h_[im], hi = h_[i];
      lo[i] = hm / 6.0;
      di[i] = (hm + hi) / 3.0;
      up[i] = hi / 6.0;
      const double dp = (get((i + 1) % n) - get(i)) / hi;
      const double dm = (get(i) - get(im)) / hm;
      rhs[i] = dp - dm;
    }
    // corners couple row 0 to n-1 and row n-1 to 0
    return solve_cyclic_tridiagonal(lo, di, up, lo[0], up[n - 1], rhs);
  }

  std::vector<Vec2> p_;
  std::vector<double> h_, t_;
  std::vector<double> mx_, my_;
};

}  // namespace detail

/// Resample the curve to `n` nodes at uniform arclength along the periodic
/// cubic spline through the current nodes.  Orientation and the starting
/// node's arclength position are preserved.
inline FrontCurve resample_uniform(const FrontCurve& c, std::size_t n) {
  if (c.size() < 4) throw ConfigError("resample_uniform: need at least 4 nodes");
  const detail::PeriodicSpline sp(c.nodes);
  // dense (parameter, arclength) table
  const std::size_t sub = 8;
  const std::size_t nd = c.size() * sub;
  std::vector<double> tp(nd + 1), sl(nd + 1);
  const double T = sp.length_parameter();
  Vec2 prev = sp.eval(0.0);
  tp[0] = 0.0;
  sl[0] = 0.0;
  for (std::size_t k = 1; k <= nd; ++k) {
    tp[k] = T * static_cast<double>(k) / static_cast<double>(nd);
    const Vec2 q = sp.eval(tp[k]);
    sl[k] = sl[k - 1] + norm(q - prev);
    prev = q;
  }
  const double total = sl[nd];
  FrontCurve out;
  out.nodes.resize(n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double target = total * static_cast<double>(i) / static_cast<double>(n);
    while (k + 1 < nd && sl[k + 1] < target) ++k;
    const double span = sl[k + 1] - sl[k];
    const double frac = span > 0 ? (target - sl[k]) / span : 0.0;
    out.nodes[i] = sp.eval(tp[k] + frac * (tp[k + 1] - tp[k]));
  }
  out.spacing = total / static_cast<double>(n);
  return out;
}

/// Populate curvature (circumscribed-circle formula on node triples) and
/// inward unit normals.  Normalizes orientation to counterclockwise first;
/// requires at least 16 nodes and a simple polygon.
inline FrontCurve curvature_and_normals(FrontCurve c) {
  if (c.size() < 16)
    throw ConfigError("curvature_and_normals: need at least 16 nodes");
  normalize_orientation(c);
  if (!is_simple(c))
    throw TopologyError("curvature_and_normals: polygon self-intersects");
  const std::size_t n = c.size();
  c.kappa.resize(n);
  c.normal.resize(n);
  double per = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& pm = c.nodes[(i + n - 1) % n];
    const Vec2& p = c.nodes[i];
    const Vec2& pp = c.nodes[(i + 1) % n];
    const Vec2 u = p - pm, v = pp - p, w = pp - pm;
    const double lu = norm(u), lv = norm(v), lw = norm(w);
    const double cr = cross(u, v);
    // collinear triples count as flat
    c.kappa[i] = (std::abs(cr) <= 1e-14 * lu * lv) ? 0.0
                                                   : 2.0 * cr / (lu * lv * lw);
    const double lt = std::max(lw, 1e-300);
    c.normal[i] = {-w.y / lt, w.x / lt};  // left rotation of the tangent
    per += lv;
  }
  c.spacing = per / static_cast<double>(n);
  return c;
}

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double L2 = dot(ab, ab);
  double t = L2 > 0 ? dot(p - a, ab) / L2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

/// Symmetric Hausdorff distance between two closed polylines.
inline double hausdorff_distance(const FrontCurve& a, const FrontCurve& b) {
  auto one_sided = [](const FrontCurve& from, const FrontCurve& to) {
    const std::size_t n = from.size(), m = to.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < m; ++j)
        best = std::min(best, point_segment_distance(from.nodes[i], to.nodes[j],
                                                     to.nodes[(j + 1) % m]));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

/// Circle and ellipse constructors used by tests and the harness.
inline FrontCurve make_circle(Vec2 center, double R, std::size_t n) {
  FrontCurve c;
  c.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
    c.nodes[i] = {center.x + R * std::cos(t), center.y + R * std::sin(t)};
  }
  c.spacing = perimeter(c) / static_cast<double>(n);
  return c;
}

inline FrontCurve make_ellipse(Vec2 center, double a, double b, std::size_t n) {
  FrontCurve c;
  c.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
    c.nodes[i] = {center.x + a * std::cos(t), center.y + b * std::sin(t)};
  }
  c.spacing = perimeter(c) / static_cast<double>(n);
  return c;
}

}  // namespace motility
