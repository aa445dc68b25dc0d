#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "motility/errors.hpp"
#include "motility/expansion.hpp"

namespace motility::harness {

enum class RunMode {
  pde1d,
  pde2d,
  front1d,
  front2d,
  phi_table,
  converge1d,
  compare2d,
  expansion_defect,
};

inline const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::pde1d: return "pde1d";
    case RunMode::pde2d: return "pde2d";
    case RunMode::front1d: return "front1d";
    case RunMode::front2d: return "front2d";
    case RunMode::phi_table: return "phi_table";
    case RunMode::converge1d: return "converge1d";
    case RunMode::compare2d: return "compare2d";
    case RunMode::expansion_defect: return "expansion_defect";
  }
  return "?";
}

enum class ForcingKind { constant, sinusoid, table };
enum class GeometryKind { front1d, circle, ellipse, polygon };

struct ForcingSpec {
  ForcingKind kind = ForcingKind::constant;
  double value = 0.0;                  // constant
  double amplitude = 0.0, omega = 1.0, offset = 0.0;  // sinusoid
  std::vector<double> times, values;   // table (linear interpolation)

  TimeSeries series() const {
    switch (kind) {
      case ForcingKind::constant: {
        const double v = value;
        return [v](double) { return v; };
      }
      case ForcingKind::sinusoid: {
        const double A = amplitude, w = omega, B = offset;
        return [A, w, B](double t) { return A * std::sin(w * t) + B; };
      }
      case ForcingKind::table: {
        const std::vector<double> ts = times, vs = values;
        return [ts, vs](double t) {
          if (t <= ts.front()) return vs.front();
          if (t >= ts.back()) return vs.back();
          const auto it = std::upper_bound(ts.begin(), ts.end(), t);
          const std::size_t j = static_cast<std::size_t>(it - ts.begin());
          const double w = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
          return vs[j - 1] + w * (vs[j] - vs[j - 1]);
        };
      }
    }
    return [](double) { return 0.0; };
  }
};

struct GeometrySpec {
  GeometryKind kind = GeometryKind::front1d;
  double x0 = 0.0;                      // front1d
  double cx = 0.0, cy = 0.0;            // centre
  double radius = 0.0;                  // circle
  double a = 0.0, b = 0.0;              // ellipse semi axes
  std::vector<double> points;           // polygon, x1,y1,x2,y2,...
  std::size_t nodes = 256;              // curve discretization
};

struct RunConfig {
  RunMode mode = RunMode::front1d;
  std::string out_dir = "out";
  unsigned long seed = 0;
  int jobs = 1;

  std::vector<double> eps = {0.05};  // single entry or decreasing list
  double beta = 0.0;

  ForcingSpec forcing;
  GeometrySpec geometry;

  double t_final = 1.0;
  double dt = 0.0;  // 0 = automatic from the stability budget

  std::size_t grid_n = 256;
  double domain = 1.0;
  double profile_L = 40.0;
  double profile_h = 0.01;
  int order = 1;

  double phi_vmin = -2.0, phi_vmax = 2.0, phi_step = 0.1;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw ConfigError("malformed number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

/// Flat key = value text with [section] headers.  '#' starts a comment.
/// Returns ordered (section.key, raw value) pairs; duplicate keys are errors.
/// The [result] section (written into manifests) is skipped on input.
inline std::vector<std::pair<std::string, std::string>> parse_ini(
    std::istream& in) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::set<std::string> seen;
  std::string line, section;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": malformed section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    if (section == "result") continue;  // manifest output block
    const std::string key = section + "." + detail::trim(line.substr(0, eq));
    if (!seen.insert(key).second)
      throw ConfigError("duplicate config key '" + key + "'");
    kv.emplace_back(key, detail::trim(line.substr(eq + 1)));
  }
  return kv;
}

/// Build and validate a RunConfig.  Every violated rule is reported; unknown
/// keys are errors.
inline RunConfig make_config(
    const std::vector<std::pair<std::string, std::string>>& kv) {
  RunConfig c;
  std::vector<std::string> errors;
  bool have_a = false, have_b = false, have_radius = false;

  auto fail = [&](const std::string& msg) { errors.push_back(msg); };

  for (const auto& [key, value] : kv) {
    try {
      if (key == "run.mode") {
        static const std::map<std::string, RunMode> modes = {
            {"pde1d", RunMode::pde1d},
            {"pde2d", RunMode::pde2d},
            {"front1d", RunMode::front1d},
            {"front2d", RunMode::front2d},
            {"phi_table", RunMode::phi_table},
            {"converge1d", RunMode::converge1d},
            {"compare2d", RunMode::compare2d},
            {"expansion_defect", RunMode::expansion_defect}};
        const auto it = modes.find(value);
        if (it == modes.end()) fail("run.mode: unknown mode '" + value + "'");
        else c.mode = it->second;
      } else if (key == "run.out") {
        c.out_dir = value;
      } else if (key == "run.seed") {
        c.seed = std::stoul(value);
      } else if (key == "run.jobs") {
        c.jobs = std::stoi(value);
      } else if (key == "model.eps") {
        c.eps = detail::parse_list(value);
      } else if (key == "model.beta") {
        c.beta = std::stod(value);
      } else if (key == "forcing.kind") {
        if (value == "constant") c.forcing.kind = ForcingKind::constant;
        else if (value == "sinusoid") c.forcing.kind = ForcingKind::sinusoid;
        else if (value == "table") c.forcing.kind = ForcingKind::table;
        else fail("forcing.kind: unknown kind '" + value + "'");
      } else if (key == "forcing.value") {
        c.forcing.value = std::stod(value);
      } else if (key == "forcing.amplitude") {
        c.forcing.amplitude = std::stod(value);
      } else if (key == "forcing.omega") {
        c.forcing.omega = std::stod(value);
      } else if (key == "forcing.offset") {
        c.forcing.offset = std::stod(value);
      } else if (key == "forcing.times") {
        c.forcing.times = detail::parse_list(value);
      } else if (key == "forcing.values") {
        c.forcing.values = detail::parse_list(value);
      } else if (key == "geometry.kind") {
        if (value == "front1d") c.geometry.kind = GeometryKind::front1d;
        else if (value == "circle") c.geometry.kind = GeometryKind::circle;
        else if (value == "ellipse") c.geometry.kind = GeometryKind::ellipse;
        else if (value == "polygon") c.geometry.kind = GeometryKind::polygon;
        else fail("geometry.kind: unknown kind '" + value + "'");
      } else if (key == "geometry.x0") {
        c.geometry.x0 = std::stod(value);
      } else if (key == "geometry.center") {
        const auto v = detail::parse_list(value);
        if (v.size() != 2) fail("geometry.center: expected two numbers");
        else { c.geometry.cx = v[0]; c.geometry.cy = v[1]; }
      } else if (key == "geometry.radius") {
        c.geometry.radius = std::stod(value);
        have_radius = true;
      } else if (key == "geometry.a") {
        c.geometry.a = std::stod(value);
        have_a = true;
      } else if (key == "geometry.b") {
        c.geometry.b = std::stod(value);
        have_b = true;
      } else if (key == "geometry.points") {
        c.geometry.points = detail::parse_list(value);
      } else if (key == "geometry.nodes") {
        c.geometry.nodes = std::stoul(value);
      } else if (key == "time.t_final") {
        c.t_final = std::stod(value);
      } else if (key == "time.dt") {
        c.dt = std::stod(value);
      } else if (key == "grid.n") {
        c.grid_n = std::stoul(value);
      } else if (key == "grid.domain") {
        c.domain = std::stod(value);
      } else if (key == "grid.profile_L") {
        c.profile_L = std::stod(value);
      } else if (key == "grid.profile_h") {
        c.profile_h = std::stod(value);
      } else if (key == "grid.order") {
        c.order = std::stoi(value);
      } else if (key == "phi.vmin") {
        c.phi_vmin = std::stod(value);
      } else if (key == "phi.vmax") {
        c.phi_vmax = std::stod(value);
      } else if (key == "phi.step") {
        c.phi_step = std::stod(value);
      } else {
        fail("unknown config key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      fail(key + ": " + e.what());
    } catch (const std::exception&) {
      fail(key + ": malformed value '" + value + "'");
    }
  }

  // cross-field rules (every violation reported)
  if (c.eps.empty()) fail("model.eps: need at least one value");
  for (double e : c.eps)
    if (!(e > 0.0 && e <= 0.5)) fail("model.eps: values must lie in (0, 0.5]");
  if ((c.mode == RunMode::converge1d || c.mode == RunMode::expansion_defect)) {
    for (std::size_t i = 1; i < c.eps.size(); ++i)
      if (!(c.eps[i] < c.eps[i - 1])) {
        fail("model.eps: list must be strictly decreasing for sweep modes");
        break;
      }
  }
  if (!(std::abs(c.beta) <= 0.5)) fail("model.beta: |beta| <= 0.5 required");
  if (!(c.t_final > 0.0)) fail("time.t_final: must be positive");
  if (c.dt < 0.0) fail("time.dt: must be >= 0 (0 = automatic)");
  if (c.jobs < 1) fail("run.jobs: must be >= 1");
  if (c.grid_n < 8) fail("grid.n: must be >= 8");
  if (!(c.domain > 0.0)) fail("grid.domain: must be positive");
  if (!(c.profile_L >= 40.0)) fail("grid.profile_L: must be >= 40");
  if (!(c.profile_h > 0.0 && c.profile_h <= 0.1))
    fail("grid.profile_h: must lie in (0, 0.1]");
  if (c.order < 0 || c.order > 3) fail("grid.order: must be 0..3");
  if (c.forcing.kind == ForcingKind::table) {
    if (c.forcing.times.size() < 2 ||
        c.forcing.times.size() != c.forcing.values.size())
      fail("forcing.times/values: need matching lists of >= 2 samples");
    for (std::size_t i = 1; i < c.forcing.times.size(); ++i)
      if (!(c.forcing.times[i] > c.forcing.times[i - 1])) {
        fail("forcing.times: must be strictly increasing");
        break;
      }
  }
  const bool needs_2d_shape = c.mode == RunMode::pde2d ||
                              c.mode == RunMode::front2d ||
                              c.mode == RunMode::compare2d;
  if (needs_2d_shape) {
    if (c.geometry.kind == GeometryKind::front1d)
      fail("geometry.kind: 2D modes need circle, ellipse or polygon");
    if (c.geometry.kind == GeometryKind::circle && !(have_radius && c.geometry.radius > 0.0))
      fail("geometry.radius: positive radius required for circles");
    if (c.geometry.kind == GeometryKind::ellipse &&
        !(have_a && have_b && c.geometry.a > 0.0 && c.geometry.b > 0.0))
      fail("geometry.a/b: positive semi-axes required for ellipses");
    if (c.geometry.kind == GeometryKind::polygon &&
        (c.geometry.points.size() < 6 || c.geometry.points.size() % 2 != 0))
      fail("geometry.points: polygon needs >= 3 x,y pairs");
    if (c.geometry.nodes < 16) fail("geometry.nodes: need >= 16 curve nodes");
  }
  if (c.mode == RunMode::phi_table) {
    if (!(c.phi_step > 0.0)) fail("phi.step: must be positive");
    if (!(c.phi_vmax > c.phi_vmin)) fail("phi.vmin/vmax: empty range");
    if (c.phi_vmin < -5.0 || c.phi_vmax > 5.0)
      fail("phi.vmin/vmax: range must lie inside [-5, 5]");
  }

  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const std::string& e : errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return make_config(parse_ini(in));
}

/// Reproducible shortest round-trip formatting.
inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt(v[i]);
  }
  return s;
}

/// Echo the full resolved configuration as manifest text (parse_ini can read
/// it back; [result] entries are appended by the runner).
inline std::string manifest_text(const RunConfig& c) {
  std::ostringstream os;
  os << "[run]\n";
  os << "mode = " << to_string(c.mode) << "\n";
  os << "out = " << c.out_dir << "\n";
  os << "seed = " << c.seed << "\n";
  os << "jobs = " << c.jobs << "\n";
  os << "[model]\n";
  os << "eps = " << fmt_list(c.eps) << "\n";
  os << "beta = " << fmt(c.beta) << "\n";
  os << "[forcing]\n";
  switch (c.forcing.kind) {
    case ForcingKind::constant:
      os << "kind = constant\n";
      os << "value = " << fmt(c.forcing.value) << "\n";
      break;
    case ForcingKind::sinusoid:
      os << "kind = sinusoid\n";
      os << "amplitude = " << fmt(c.forcing.amplitude) << "\n";
      os << "omega = " << fmt(c.forcing.omega) << "\n";
      os << "offset = " << fmt(c.forcing.offset) << "\n";
      break;
    case ForcingKind::table:
      os << "kind = table\n";
      os << "times = " << fmt_list(c.forcing.times) << "\n";
      os << "values = " << fmt_list(c.forcing.values) << "\n";
      break;
  }
  os << "[geometry]\n";
  switch (c.geometry.kind) {
    case GeometryKind::front1d:
      os << "kind = front1d\n";
      os << "x0 = " << fmt(c.geometry.x0) << "\n";
      break;
    case GeometryKind::circle:
      os << "kind = circle\n";
      os << "center = " << fmt(c.geometry.cx) << ", " << fmt(c.geometry.cy) << "\n";
      os << "radius = " << fmt(c.geometry.radius) << "\n";
      os << "nodes = " << c.geometry.nodes << "\n";
      break;
    case GeometryKind::ellipse:
      os << "kind = ellipse\n";
      os << "center = " << fmt(c.geometry.cx) << ", " << fmt(c.geometry.cy) << "\n";
      os << "a = " << fmt(c.geometry.a) << "\n";
      os << "b = " << fmt(c.geometry.b) << "\n";
      os << "nodes = " << c.geometry.nodes << "\n";
      break;
    case GeometryKind::polygon:
      os << "kind = polygon\n";
      os << "points = " << fmt_list(c.geometry.points) << "\n";
      os << "nodes = " << c.geometry.nodes << "\n";
      break;
  }
  os << "[time]\n";
  os << "t_final = " << fmt(c.t_final) << "\n";
  os << "dt = " << fmt(c.dt) << "\n";
  os << "[grid]\n";
  os << "n = " << c.grid_n << "\n";
  os << "domain = " << fmt(c.domain) << "\n";
  os << "profile_L = " << fmt(c.profile_L) << "\n";
  os << "profile_h = " << fmt(c.profile_h) << "\n";
  os << "order = " << c.order << "\n";
  if (c.mode == RunMode::phi_table) {
    os << "[phi]\n";
    os << "vmin = " << fmt(c.phi_vmin) << "\n";
    os << "vmax = " << fmt(c.phi_vmax) << "\n";
    os << "step = " << fmt(c.phi_step) << "\n";
  }
  return os.str();
}

}  // namespace motility::harness
