// confgeo command line front end.
//
// Subcommands:
//   integrate  integrate one of the curve flows from initial data
//   oracle     sample a closed-form solution family as a trajectory
//   check      run a named invariant suite and emit a JSON report
//   vary       first variation of the action along a model curve
//   bvp        two-point boundary value problem solved by shooting
//   figure1    emit the three reference trajectories as CSV files
//
// Exit codes: 0 success, 1 numerical failure or a failed check,
// 2 input error (flags, config files, schema).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "confgeo/dynamics.hpp"
#include "confgeo/errors.hpp"
#include "confgeo/fd.hpp"
#include "confgeo/geometry.hpp"
#include "confgeo/hamiltonian.hpp"
#include "confgeo/integrate.hpp"
#include "confgeo/oracles.hpp"
#include "confgeo/tractor.hpp"
#include "confgeo/trajectory.hpp"
#include "confgeo/types.hpp"
#include "confgeo/variational.hpp"

namespace {

using namespace confgeo;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Parsing and output helpers.

Vec parse_vec(const std::string& text) {
  std::string clean;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) clean += c;
  std::vector<double> vals;
  std::stringstream ss(clean);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw ConfigError("bad vector component: '" + item + "'");
    }
    if (pos != item.size()) throw ConfigError("bad vector component: '" + item + "'");
    vals.push_back(v);
  }
  if (vals.empty()) throw ConfigError("empty vector: '" + text + "'");
  Vec out(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) out[static_cast<int>(i)] = vals[i];
  return out;
}

// Initial data "x;u", "x;u;a", or "x;u;a;j"; components comma separated.
CurveState parse_ic(const std::string& text) {
  std::vector<Vec> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) parts.push_back(parse_vec(item));
  if (parts.size() < 2 || parts.size() > 4)
    throw ConfigError("initial condition needs 2 to 4 ';'-separated vectors, got " +
                      std::to_string(parts.size()));
  for (const Vec& p : parts)
    if (p.size() != parts[0].size())
      throw ConfigError("initial condition vectors must share one dimension");
  CurveState st;
  st.x = parts[0];
  st.u = parts[1];
  st.a = parts.size() > 2 ? parts[2] : Vec(Vec::Zero(parts[0].size()));
  if (parts.size() == 4) st.j = parts[3];
  return st;
}

double env_default_tol() {
  if (const char* s = std::getenv("CONFGEO_DEFAULT_TOL")) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos == std::string(s).size() && v > 0) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("CONFGEO_DEFAULT_TOL is not a positive number");
  }
  return 1e-10;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) throw ConfigError(name + " must be a non-empty array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(name + " must contain numbers only");
    v[static_cast<int>(i)] = j[i].get<double>();
  }
  return v;
}

std::string str_field(const json& j, const char* key) {
  if (!j.at(key).is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

double num_field(const json& j, const char* key) {
  if (!j.at(key).is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

int int_field(const json& j, const char* key) {
  if (!j.at(key).is_number_integer())
    throw ConfigError(std::string("'") + key + "' must be an integer");
  return j.at(key).get<int>();
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || (it.key() == k);
    if (!known) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

json load_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open file: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + " is not valid JSON: " + e.what());
  }
  return j;
}

// FNV-1a of the canonical dump.  nlohmann objects iterate in key order, so
// the hash is stable under key reordering in the input file.
std::string config_hash(const json& j) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open output file: " + path);
  os << text;
}

void emit_trajectory(const Trajectory& traj, const std::string& out, const std::string& format) {
  if (format != "csv" && format != "json") throw ConfigError("unknown format: " + format);
  if (out.empty() || out == "-") {
    if (format == "csv")
      write_csv(traj, std::cout);
    else
      write_json(traj, std::cout);
    return;
  }
  save_trajectory(traj, out, format);
}

std::vector<double> make_times(double t0, double t1, int samples) {
  if (samples < 2) throw ConfigError("need at least 2 samples");
  if (!(t1 > t0)) throw ConfigError("need t1 > t0");
  return uniform_times(t0, t1, samples - 1);
}

// ---------------------------------------------------------------------------
// Model curve builders shared by oracle and vary.

CurveModel cubic_curve(const Vec& p0, const Vec& p1, const Vec& p2, const Vec& p3) {
  CurveModel m;
  m.x = [=](double t) { return Vec(p0 + t * p1 + t * t * p2 + t * t * t * p3); };
  m.dx = [=](double t) { return Vec(p1 + 2 * t * p2 + 3 * t * t * p3); };
  m.d2x = [=](double t) { return Vec(2 * p2 + 6 * t * p3); };
  m.d3x = [=](double) { return Vec(6 * p3); };
  return m;
}

struct CurveFlags {
  std::string kind = "circle";
  std::string x0, u0, a0;        // circle data
  std::string p0, q0, r0;        // spiral frame
  std::string through;           // spiral through a 2-jet "x;u;a"
  double c = 0.0, rate = 1.0;
  bool c_given = false;
  std::string k0, k1, k2, k3;    // cubic coefficients
};

CurveModel build_curve(const CurveFlags& cf, int& dim, std::string& id) {
  if (cf.kind == "circle") {
    if (cf.x0.empty() || cf.u0.empty() || cf.a0.empty())
      throw ConfigError("circle needs --x0, --u0, --a0");
    const oracles::CircleParams p =
        oracles::make_circle(parse_vec(cf.x0), parse_vec(cf.u0), parse_vec(cf.a0));
    dim = static_cast<int>(p.x0.size());
    id = "circle-oracle";
    return oracles::circle_model(p);
  }
  if (cf.kind == "spiral") {
    oracles::SpiralParams p;
    if (!cf.through.empty()) {
      const CurveState st = parse_ic(cf.through);
      p = oracles::spiral_through(st.x, st.u, st.a);
    } else {
      if (cf.p0.empty() || cf.q0.empty() || cf.r0.empty() || !cf.c_given)
        throw ConfigError("spiral needs --p0, --q0, --r0, --c (or --through)");
      p = oracles::make_spiral(parse_vec(cf.p0), parse_vec(cf.q0), parse_vec(cf.r0), cf.c,
                               cf.rate);
    }
    dim = static_cast<int>(p.p0.size());
    id = "spiral-oracle";
    return oracles::spiral_model(p);
  }
  if (cf.kind == "cubic") {
    if (cf.k0.empty() || cf.k1.empty()) throw ConfigError("cubic needs --k0 and --k1");
    const Vec p0 = parse_vec(cf.k0);
    const Vec p1 = parse_vec(cf.k1);
    const Vec p2 = cf.k2.empty() ? Vec(Vec::Zero(p0.size())) : parse_vec(cf.k2);
    const Vec p3 = cf.k3.empty() ? Vec(Vec::Zero(p0.size())) : parse_vec(cf.k3);
    if (p1.size() != p0.size() || p2.size() != p0.size() || p3.size() != p0.size())
      throw ConfigError("cubic coefficients must share one dimension");
    dim = static_cast<int>(p0.size());
    id = "cubic-model";
    return cubic_curve(p0, p1, p2, p3);
  }
  throw ConfigError("unknown curve kind: " + cf.kind);
}

// ---------------------------------------------------------------------------
// integrate

struct IntegrateFlags {
  std::string config_path;
  std::string metric = "flat-euclidean";
  int dim = 0;  // 0 = infer from the initial data
  std::string equation = "cg3";
  std::string ic, cvec;
  double t0 = 0.0, t1 = 1.0;
  int samples = 101;
  double tol = 0.0;  // 0 = CONFGEO_DEFAULT_TOL or 1e-10
  std::string method = "rkf45";
  std::string out = "-";
  std::string format = "csv";
  std::string path = "auto";
};

// C for the flat conserved-vector route: explicit vector, else from the
// 3-jet, else lifted from the third order flow, whose solutions satisfy
// J = 3<U,A>A/|U|^2 - (3/2)|A|^2 U/|U|^2 in a flat chart.
Vec resolve_c(const CurveState& init, const Vec& given, const MetricSpec& spec) {
  if (given.size() != 0) {
    if (given.size() != init.x.size())
      throw ConfigError("--c-vector dimension does not match the initial data");
    return given;
  }
  if (init.j) return mercator_c(init, spec.signature);
  const auto ip = [&](const Vec& a, const Vec& b) {
    return a.cwiseProduct(spec.signature).dot(b);
  };
  const double uu = ip(init.u, init.u);
  if (uu == 0.0) throw BadParams("null velocity in the initial data");
  CurveState lifted = init;
  lifted.j = Vec((3.0 * ip(init.u, init.a) / uu) * init.a -
                 (1.5 * ip(init.a, init.a) / uu) * init.u);
  return mercator_c(lifted, spec.signature);
}

int cmd_integrate(const IntegrateFlags& f, const std::optional<CurveState>& ic,
                  const std::optional<Vec>& cvec) {
  if (!ic) throw ConfigError("integrate needs --ic or an 'ic' entry in the config");
  const CurveState init = *ic;
  const int dim = f.dim > 0 ? f.dim : init.dim();
  if (dim != init.dim())
    throw ConfigError("--dim does not match the initial data dimension");
  const MetricSpec spec = MetricSpec::from_name(f.metric, dim);
  const std::vector<double> times = make_times(f.t0, f.t1, f.samples);
  IntegratorOptions opts;
  opts.method = method_from_name(f.method);
  opts.abs_tol = opts.rel_tol = f.tol > 0 ? f.tol : env_default_tol();
  const Vec given = cvec ? *cvec : Vec();

  Trajectory traj;
  if (f.equation == "cg3") {
    traj = integrate_cg3(spec, init, times, opts);
  } else if (f.equation == "geodesic") {
    traj = integrate_geodesic(spec, init, times, opts);
  } else if (f.equation == "arclength-cg") {
    traj = integrate_arclength_cg(spec, init, times, opts);
  } else if (f.equation == "flat-cform") {
    traj = integrate_flat_cform(spec, init, times, resolve_c(init, given, spec), opts);
  } else if (f.equation == "mercator4") {
    bool cform = false;
    if (f.path == "cform") {
      if (!spec.is_flat()) throw ConfigError("path 'cform' needs a flat metric");
      cform = true;
    } else if (f.path == "auto") {
      cform = spec.is_flat();
    } else if (f.path != "generic") {
      throw ConfigError("unknown path: " + f.path + " (auto, cform, generic)");
    }
    if (cform) {
      traj = integrate_flat_cform(spec, init, times, resolve_c(init, given, spec), opts);
    } else {
      CurveState init4 = init;
      if (!init4.j && given.size() != 0)
        init4.j = flat_jerk_from_c(init, given, spec.signature);
      traj = integrate_mercator4(spec, init4, times, opts);
    }
  } else {
    throw ConfigError("unknown equation: " + f.equation);
  }
  emit_trajectory(traj, f.out, f.format);
  return 0;
}

// ---------------------------------------------------------------------------
// oracle

int cmd_oracle(const CurveFlags& cf, double t0, double t1, int samples,
               const std::string& out, const std::string& format) {
  if (cf.kind != "circle" && cf.kind != "spiral")
    throw ConfigError("oracle kinds: circle, spiral");
  int dim = 0;
  std::string id;
  const CurveModel model = build_curve(cf, dim, id);
  const MetricSpec spec = MetricSpec::flat_euclidean(dim);
  const Trajectory traj = trajectory_from_model(spec, model, make_times(t0, t1, samples), id);
  emit_trajectory(traj, out, format);
  return 0;
}

// ---------------------------------------------------------------------------
// vary

// Three-level extrapolated difference quotient in the variation parameter.
double direct_variation(const MetricSpec& spec, const CurveModel& model,
                        const VariationField& var, double t0, double t1) {
  const auto quotient = [&](double s) {
    return (perturbed_functional(spec, model, var, s, t0, t1, 1201) -
            perturbed_functional(spec, model, var, -s, t0, t1, 1201)) /
           (2.0 * s);
  };
  const double d1 = quotient(0.01), d2 = quotient(0.005), d3 = quotient(0.0025);
  return (64.0 * d3 - 20.0 * d2 + d1) / 45.0;
}

struct VaryFlags {
  std::string metric = "flat-euclidean";
  int dim = 0;
  double t0 = 0.0, t1 = 1.0;
  double bump_t0 = 0.15, bump_t1 = 0.85;
  std::string direction;
  int mode = 0;
  int samples = 801;
  std::string out = "-";
};

int cmd_vary(const CurveFlags& cf, const VaryFlags& vf) {
  if (vf.direction.empty()) throw ConfigError("vary needs --direction");
  int dim = 0;
  std::string id;
  const CurveModel model = build_curve(cf, dim, id);
  if (vf.dim > 0 && vf.dim != dim)
    throw ConfigError("--dim does not match the curve dimension");
  const Vec dir = parse_vec(vf.direction);
  if (dir.size() != dim) throw ConfigError("--direction dimension does not match the curve");
  if (vf.mode != 0 && vf.mode != 1) throw ConfigError("--mode must be 0 or 1");
  if (!(vf.t0 <= vf.bump_t0 && vf.bump_t0 < vf.bump_t1 && vf.bump_t1 <= vf.t1))
    throw ConfigError("bump support must lie inside [t0, t1]");
  const MetricSpec spec = MetricSpec::from_name(vf.metric, dim);
  const VariationField var = bump_variation(vf.bump_t0, vf.bump_t1, dir, vf.mode);

  const FirstVariation fv = first_variation_formula(spec, model, var, vf.t0, vf.t1, vf.samples);
  const double direct = direct_variation(spec, model, var, vf.t0, vf.t1);
  const double diff = std::abs(fv.total() - direct);
  const double rel =
      diff / std::max({std::abs(fv.total()), std::abs(direct), 1e-3});

  json config = {{"command", "vary"},   {"metric", vf.metric},   {"curve", cf.kind},
                 {"t0", vf.t0},         {"t1", vf.t1},           {"bump_t0", vf.bump_t0},
                 {"bump_t1", vf.bump_t1}, {"direction", vec_json(dir)}, {"mode", vf.mode},
                 {"samples", vf.samples}};
  json report = {{"command", "vary"},
                 {"config", config},
                 {"config_hash", config_hash(config)},
                 {"integral_term", fv.integral_term},
                 {"boundary_term", fv.boundary_term},
                 {"formula_total", fv.total()},
                 {"difference_quotient", direct},
                 {"abs_difference", diff},
                 {"rel_difference", rel}};
  write_text(report.dump(2) + "\n", vf.out);
  return 0;
}

// ---------------------------------------------------------------------------
// check suites.  Each row is an upper bound (residual <= tolerance) unless
// lower_bound is set, in which case a negative control must exceed it.

struct CheckRow {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool lower_bound = false;

  bool pass() const { return lower_bound ? residual >= tolerance : residual <= tolerance; }
};

VariationField trig_variation(const Vec& amp, const Vec& freq, const Vec& phase) {
  VariationField f;
  f.v = [=](double t) {
    Vec v(amp.size());
    for (int i = 0; i < amp.size(); ++i) v[i] = amp[i] * std::sin(freq[i] * t + phase[i]);
    return v;
  };
  f.dv = [=](double t) {
    Vec v(amp.size());
    for (int i = 0; i < amp.size(); ++i)
      v[i] = amp[i] * freq[i] * std::cos(freq[i] * t + phase[i]);
    return v;
  };
  f.d2v = [=](double t) {
    Vec v(amp.size());
    for (int i = 0; i < amp.size(); ++i)
      v[i] = -amp[i] * freq[i] * freq[i] * std::sin(freq[i] * t + phase[i]);
    return v;
  };
  return f;
}

Vec fixed_vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

CurveModel fixture_cubic() {
  return cubic_curve(fixed_vec3(0.2, -0.1, 0.3), fixed_vec3(1.0, 0.4, -0.2),
                     fixed_vec3(-0.3, 0.5, 0.25), fixed_vec3(0.15, -0.2, 0.1));
}

std::vector<CheckRow> suite_invariance() {
  const int n = 3;
  const CurveModel model = fixture_cubic();
  const VariationField var =
      trig_variation(fixed_vec3(0.8, -0.5, 0.6), fixed_vec3(1.3, 0.9, 0.7),
                     fixed_vec3(0.2, 1.0, -0.4));
  const MetricSpec base = MetricSpec::flat_euclidean(n);
  const MetricSpec rescaled[] = {
      MetricSpec::conformally_flat(n, ConformalFactor::sphere(), "sphere-factor"),
      MetricSpec::conformally_flat(n, ConformalFactor::exponential(fixed_vec3(0.3, -0.1, 0.2)),
                                   "exp-factor")};

  double e_diff = 0, l_diff = 0, d_diff = 0, b_diff = 0, k_diff = 0;
  for (const MetricSpec& hat : rescaled) {
    const MetricSpec* specs[2] = {&base, &hat};
    for (int i = 0; i < 10; ++i) {
      const double t = 0.1 + 0.8 * i / 9.0;
      const Vec v = var.v(t);
      Vec e[2], d[2];
      double l[2], b[2], kp[2];
      for (int m = 0; m < 2; ++m) {
        const CurveState st = jet_at(*specs[m], model, t);
        const GeometryJet gj = geometry_jet(*specs[m], st.x, JetLevel::Full);
        const Vec dv_cov = Vec(var.dv(t) + gj.gamma_quad(st.u, v));
        e[m] = e_vector(gj, st);
        l[m] = lagrangian_L(gj, st);
        d[m] = d_op(gj, st, v, dv_cov);
        b[m] = boundary_term(*specs[m], model, var, t);
        kp[m] = gj.inner(k_vector(gj, st), v) / gj.norm2(st.u);
      }
      e_diff = std::max(e_diff, (e[0] - e[1]).norm());
      l_diff = std::max(l_diff, std::abs(l[0] - l[1]));
      d_diff = std::max(d_diff, (d[0] - d[1]).norm());
      b_diff = std::max(b_diff, std::abs(b[0] - b[1]));
      k_diff = std::max(k_diff, std::abs(kp[0] - kp[1]));
    }
  }
  return {{"e-vector", e_diff, 1e-7},
          {"lagrangian-density", l_diff, 1e-7},
          {"d-operator", d_diff, 1e-7},
          {"boundary-density", b_diff, 1e-7},
          {"k-vector-pairing", k_diff, 1e-7}};
}

std::vector<CheckRow> suite_first_integrals() {
  std::vector<CheckRow> rows;
  const MetricSpec flat3 = MetricSpec::flat_euclidean(3);
  IntegratorOptions tight;
  tight.abs_tol = tight.rel_tol = 1e-12;

  {  // C is constant along the third order flow.
    CurveState init;
    init.x = Vec::Zero(3);
    init.u = Vec::Unit(3, 0);
    init.a = Vec::Unit(3, 1);
    const Trajectory traj = integrate_cg3(flat3, init, uniform_times(0.0, 1.0, 100), tight);
    const Vec c0 = oracles::first_integral_c(init.u, init.a);
    double drift = 0;
    for (const CurveState& st : traj.states)
      drift = std::max(drift, (oracles::first_integral_c(st.u, st.a) - c0).norm());
    rows.push_back({"cg3-circle-c-drift", drift, 1e-8});
  }
  {  // Magnetic flow conserves |U| and |A| = |e||U|.
    const KahlerStructure ks = standard_kahler(2);
    const double e = 0.7;
    Vec y0(4);
    y0 << 0, 0, 1, 0;
    const Flow flow = [&](double, const Vec& y) {
      const MagneticDeriv md = magnetic_rhs(ks, e, y.segment(0, 2), y.segment(2, 2));
      Vec dy(4);
      dy << md.dx, md.du;
      return dy;
    };
    const auto ys = integrate_dense(flow, y0, uniform_times(0.0, 3.0, 150), tight);
    double sd = 0, ad = 0;
    for (const Vec& y : ys) {
      const Vec u = y.segment(2, 2);
      sd = std::max(sd, std::abs(u.norm() - 1.0));
      ad = std::max(ad, std::abs((e * (ks.jmat * u)).norm() - e));
    }
    rows.push_back({"magnetic-speed-drift", sd, 1e-9});
    rows.push_back({"magnetic-acceleration-drift", ad, 1e-9});
  }
  {  // Q is constant for conformal Killing-Yano pairs, not for the control.
    Mat y0(3, 3);
    y0 << 0, 0.4, -0.2, -0.4, 0, 0.3, 0.2, -0.3, 0;
    const CkyPair pairs[] = {constant_cky(y0), wedge_cky(fixed_vec3(0.3, -0.2, 0.5))};
    const CkyPair control = radial_noncky(y0);
    CurveState init;
    init.x = fixed_vec3(0.2, 0, 0.1);
    init.u = Vec::Unit(3, 0);
    init.a = fixed_vec3(0, 0.4, 0.1);
    const Trajectory traj =
        integrate_arclength_cg(flat3, init, uniform_times(0.0, 3.0, 60), tight);
    double drift = 0;
    for (const CkyPair& pair : pairs) {
      const double q0 = first_integral_q(pair, traj.states.front());
      for (const CurveState& st : traj.states)
        drift = std::max(drift, std::abs(first_integral_q(pair, st) - q0));
    }
    rows.push_back({"cky-q-drift", drift, 1e-8});
    const double q0 = first_integral_q(control, traj.states.front());
    double cd = 0;
    for (const CurveState& st : traj.states)
      cd = std::max(cd, std::abs(first_integral_q(control, st) - q0));
    rows.push_back({"non-cky-control-drift", cd, 1e-3, true});
  }
  return rows;
}

std::vector<CheckRow> suite_tractor() {
  std::vector<CheckRow> rows;
  const MetricSpec flat3 = MetricSpec::flat_euclidean(3);
  const CurveModel circle = oracles::circle_model(
      oracles::make_circle(Vec::Zero(3), Vec::Unit(3, 0), Vec(0.5 * Vec::Unit(3, 1))));

  {  // The acceleration tractor of a circle is null and parallel.
    double nd = 0;
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const CurveState st = jet_at(flat3, circle, t);
      const GeometryJet gj = geometry_jet(flat3, st.x, JetLevel::Full);
      nd = std::max(nd, std::abs(tractor_norm(gj, acceleration_tractor(gj, st))));
    }
    rows.push_back({"circle-tractor-null", nd, 1e-9});

    const TractorField field = [&](double s) {
      const CurveState ss = jet_at(flat3, circle, s);
      const GeometryJet gs = geometry_jet(flat3, ss.x, JetLevel::Full);
      return acceleration_tractor(gs, ss);
    };
    double pd = 0;
    for (double t : {0.2, 0.5, 0.8}) {
      const Tractor dt = tractor_field_derivative(flat3, circle, field, t);
      pd = std::max(pd, std::sqrt(dt.sigma * dt.sigma + dt.mu.squaredNorm() + dt.rho * dt.rho));
    }
    rows.push_back({"circle-tractor-parallel", pd, 1e-8});
  }
  {  // Spirals have tractor norm bounded away from zero.
    double least = 1e300;
    for (double c : {1.5, 3.0}) {
      const CurveModel spiral = oracles::spiral_model(oracles::make_spiral(
          Vec(0.6 * Vec::Unit(3, 0)), Vec(0.6 * Vec::Unit(3, 1)), Vec::Zero(3), c));
      for (double t : {0.0, 0.3, 0.6, 0.9}) {
        const CurveState st = jet_at(flat3, spiral, t);
        const GeometryJet gj = geometry_jet(flat3, st.x, JetLevel::Full);
        least = std::min(least, std::abs(tractor_norm(gj, acceleration_tractor(gj, st))));
      }
    }
    rows.push_back({"spiral-tractor-norm", least, 1e-2, true});
  }
  {  // (1/2)<A,A>_T equals the Lagrangian density.
    const CurveModel cubic = fixture_cubic();
    const MetricSpec metrics[] = {flat3, MetricSpec::round_sphere_stereographic(3)};
    double kd = 0;
    for (const MetricSpec& spec : metrics)
      for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const CurveState st = jet_at(spec, cubic, t);
        const GeometryJet gj = geometry_jet(spec, st.x, JetLevel::Full);
        kd = std::max(kd, std::abs(tractor_kinetic_energy(gj, st) - lagrangian_L(gj, st)));
      }
    rows.push_back({"kinetic-energy-identity", kd, 1e-8});
  }
  return rows;
}

std::vector<CheckRow> suite_theorem1() {
  const MetricSpec flat3 = MetricSpec::flat_euclidean(3);
  const MetricSpec sphere3 = MetricSpec::round_sphere_stereographic(3);
  struct Fixture {
    std::string name;
    const MetricSpec* spec;
    CurveModel model;
    VariationField var;
  };
  const Fixture fixtures[] = {
      {"spiral-bump", &flat3,
       oracles::spiral_model(oracles::make_spiral(Vec(0.5 * Vec::Unit(3, 0)),
                                                  Vec(0.5 * Vec::Unit(3, 1)), Vec::Zero(3),
                                                  2.0, 0.8)),
       bump_variation(0.15, 0.85, fixed_vec3(0, 1, 0.3))},
      {"flat-cubic-bump", &flat3, fixture_cubic(),
       bump_variation(0.2, 0.9, fixed_vec3(1, -0.5, 0.2), 1)},
      {"sphere-cubic-bump", &sphere3,
       cubic_curve(fixed_vec3(0.1, -0.05, 0.2), fixed_vec3(0.4, 0.3, -0.1),
                   fixed_vec3(-0.15, 0.2, 0.1), fixed_vec3(0.05, -0.1, 0.08)),
       bump_variation(0.15, 0.85, fixed_vec3(0.3, 1, -0.4))},
  };
  std::vector<CheckRow> rows;
  for (const Fixture& fx : fixtures) {
    const double formula = first_variation_formula(*fx.spec, fx.model, fx.var, 0, 1, 801).total();
    const double direct = direct_variation(*fx.spec, fx.model, fx.var, 0, 1);
    const double rel =
        std::abs(formula - direct) / std::max({std::abs(formula), std::abs(direct), 1e-3});
    rows.push_back({fx.name, rel, 1e-5});
  }
  return rows;
}

Vec pack_ostro(const OstroState& s) {
  const int n = s.dim();
  Vec y(4 * n);
  y << s.x, s.u, s.p, s.r;
  return y;
}

OstroState unpack_ostro(const Vec& y) {
  const int n = static_cast<int>(y.size()) / 4;
  return {y.segment(0, n), y.segment(n, n), y.segment(2 * n, n), y.segment(3 * n, n)};
}

Observable constant_observable(double value, int n) {
  Observable o;
  o.value = [value](const Vec&, const Vec&, const Vec&) { return value; };
  const auto zero = [n](const Vec&, const Vec&, const Vec&) { return Vec(Vec::Zero(n)); };
  o.grad_x = zero;
  o.grad_u = zero;
  o.grad_a = zero;
  return o;
}

std::vector<CheckRow> suite_hamiltonian() {
  std::vector<CheckRow> rows;
  const MetricSpec flat3 = MetricSpec::flat_euclidean(3);
  IntegratorOptions tight;
  tight.abs_tol = tight.rel_tol = 1e-12;

  {  // Canonical flow against the conserved-vector route, plus energy drift.
    CurveState init;
    init.x = Vec::Zero(3);
    init.u = Vec::Unit(3, 0);
    init.a = Vec(0.8 * Vec::Unit(3, 1));
    const Vec cvec = fixed_vec3(0.1, -0.2, 0.3);
    CurveState init4 = init;
    init4.j = flat_jerk_from_c(init, cvec);
    const std::vector<double> times = uniform_times(0.0, 1.0, 20);
    const Flow flow = [](double, const Vec& y) {
      return pack_ostro(ostro_flow_rhs(unpack_ostro(y)));
    };
    const auto ys = integrate_dense(flow, pack_ostro(ostro_from_jet(init4)), times, tight);
    const Trajectory traj = integrate_flat_cform(flat3, init, times, cvec, tight);
    const double h0 = ostro_hamiltonian(unpack_ostro(ys.front()));
    double gap = 0, hd = 0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      gap = std::max(gap, (ys[i].segment(0, 3) - traj.states[i].x).norm());
      hd = std::max(hd, std::abs(ostro_hamiltonian(unpack_ostro(ys[i])) - h0));
    }
    rows.push_back({"ostrogradsky-trajectory-gap", gap, 1e-8});
    rows.push_back({"ostrogradsky-energy-drift", hd, 1e-9});
  }
  {  // Poisson flow of H = Omega(A,U) obeys d3x/dt3 = -w^2 dx/dt.
    const double w = 1.25;
    CurveState s0;
    s0.x = Vec::Zero(2);
    s0.u = Vec::Unit(2, 0);
    s0.a = Vec::Unit(2, 1);
    const Flow flow = [w](double, const Vec& y) {
      CurveState st;
      st.x = y.segment(0, 2);
      st.u = y.segment(2, 2);
      st.a = y.segment(4, 2);
      const Cg3Deriv d = poisson_flow_rhs(w, st);
      Vec dy(6);
      dy << d.dx, d.du, d.da;
      return dy;
    };
    Vec y0(6);
    y0 << s0.x, s0.u, s0.a;
    // h = 0.02 keeps the 1/h^3 stencil roundoff below the tolerance.
    const std::vector<double> ts = uniform_times(0.0, 2.0, 100);
    const auto ys = integrate_dense(flow, y0, ts, tight);
    std::vector<Vec> xs(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) xs[i] = ys[i].segment(0, 2);
    const auto d3 = fd::derivative_samples(ts, xs, 3, 9);
    // Centered stencils only; the one-sided end stencils measure themselves.
    double res = 0;
    for (std::size_t i = 4; i + 4 < ys.size(); ++i)
      res = std::max(res, (d3[i] + w * w * Vec(ys[i].segment(2, 2))).norm());
    rows.push_back({"oscillator-third-order-residual", res, 1e-9});
  }
  {  // Jacobi identity is exact on coordinate observables (constant brackets).
    const KahlerStructure ks = standard_kahler(2);
    const double w = 1.25;
    const Vec x = parse_vec("0.3,-0.2"), u = parse_vec("0.5,0.1"), a = parse_vec("-0.4,0.25");
    std::vector<Observable> obs;
    for (int block = 0; block < 3; ++block)
      for (int i = 0; i < 2; ++i) obs.push_back(coordinate_observable(block, i, 2));
    double jmax = 0;
    for (const Observable& f : obs)
      for (const Observable& g : obs)
        for (const Observable& h : obs) {
          const double gh = poisson_bracket(ks, w, g, h, x, u, a);
          const double hf = poisson_bracket(ks, w, h, f, x, u, a);
          const double fg = poisson_bracket(ks, w, f, g, x, u, a);
          const double j =
              poisson_bracket(ks, w, f, constant_observable(gh, 2), x, u, a) +
              poisson_bracket(ks, w, g, constant_observable(hf, 2), x, u, a) +
              poisson_bracket(ks, w, h, constant_observable(fg, 2), x, u, a);
          jmax = std::max(jmax, std::abs(j));
        }
    rows.push_back({"jacobi-identity", jmax, 0.0});
    rows.push_back({"dirac-bracket-residual", dirac_bracket_check(ks).max_residual, 1e-12});
  }
  return rows;
}

int cmd_check(const std::string& suite, const std::string& out) {
  std::vector<CheckRow> rows;
  if (suite == "invariance")
    rows = suite_invariance();
  else if (suite == "first-integrals")
    rows = suite_first_integrals();
  else if (suite == "tractor")
    rows = suite_tractor();
  else if (suite == "theorem1")
    rows = suite_theorem1();
  else if (suite == "hamiltonian")
    rows = suite_hamiltonian();
  else
    throw ConfigError("unknown suite: " + suite +
                      " (invariance, first-integrals, tractor, theorem1, hamiltonian)");

  bool all = true;
  json checks = json::array();
  for (const CheckRow& r : rows) {
    all = all && r.pass();
    checks.push_back({{"name", r.name},
                      {"residual", r.residual},
                      {"tolerance", r.tolerance},
                      {"kind", r.lower_bound ? "lower-bound" : "upper-bound"},
                      {"pass", r.pass()}});
  }
  const json config = {{"command", "check"}, {"suite", suite}};
  const json report = {{"command", "check"},
                       {"suite", suite},
                       {"config_hash", config_hash(config)},
                       {"checks", checks},
                       {"passed", all}};
  write_text(report.dump(2) + "\n", out);
  return all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// bvp

int cmd_bvp(const std::string& problem_path, const std::string& out,
            const std::string& traj_out, const std::string& format) {
  const json j = load_json_file(problem_path);
  check_keys(j, {"metric", "dim", "x0", "u0", "x1", "u1", "t0", "t1", "options", "guess"},
             "bvp problem");
  for (const char* key : {"x0", "u0", "x1", "u1"})
    if (!j.contains(key)) throw ConfigError(std::string("bvp problem needs '") + key + "'");

  BvpProblem prob;
  prob.x0 = vec_from_json(j.at("x0"), "x0");
  prob.u0 = vec_from_json(j.at("u0"), "u0");
  prob.x1 = vec_from_json(j.at("x1"), "x1");
  prob.u1 = vec_from_json(j.at("u1"), "u1");
  const int dim = j.contains("dim") ? int_field(j, "dim") : static_cast<int>(prob.x0.size());
  if (dim != prob.x0.size() || prob.u0.size() != prob.x0.size() ||
      prob.x1.size() != prob.x0.size() || prob.u1.size() != prob.x0.size())
    throw ConfigError("bvp endpoint vectors must share the metric dimension");
  prob.metric = MetricSpec::from_name(
      j.contains("metric") ? str_field(j, "metric") : "flat-euclidean", dim);
  prob.t0 = j.contains("t0") ? num_field(j, "t0") : 0.0;
  prob.t1 = j.contains("t1") ? num_field(j, "t1") : 1.0;

  BvpOptions bopts;
  IntegratorOptions iopts;
  iopts.abs_tol = iopts.rel_tol = env_default_tol();
  if (j.contains("options")) {
    const json& o = j.at("options");
    check_keys(o,
               {"tolerance", "max_iterations", "initial_damping", "jacobian_step",
                "output_samples", "integrator_tol"},
               "bvp options");
    if (o.contains("tolerance")) bopts.tolerance = num_field(o, "tolerance");
    if (o.contains("max_iterations")) bopts.max_iterations = int_field(o, "max_iterations");
    if (o.contains("initial_damping")) bopts.initial_damping = num_field(o, "initial_damping");
    if (o.contains("jacobian_step")) bopts.jacobian_step = num_field(o, "jacobian_step");
    if (o.contains("output_samples")) bopts.output_samples = int_field(o, "output_samples");
    if (o.contains("integrator_tol"))
      iopts.abs_tol = iopts.rel_tol = num_field(o, "integrator_tol");
  }
  Vec a0_guess, j0_guess;
  if (j.contains("guess")) {
    const json& g = j.at("guess");
    check_keys(g, {"a0", "j0"}, "bvp guess");
    if (g.contains("a0")) a0_guess = vec_from_json(g.at("a0"), "guess.a0");
    if (g.contains("j0")) j0_guess = vec_from_json(g.at("j0"), "guess.j0");
  }

  json report = {{"command", "bvp"}, {"config_hash", config_hash(j)}};
  try {
    const BvpResult res = bvp_shoot(prob, a0_guess, j0_guess, bopts, iopts);
    json trace = json::array();
    for (const BvpTraceRow& row : res.trace)
      trace.push_back({{"iteration", row.iteration},
                       {"residual", row.residual},
                       {"damping", row.damping}});
    report["converged"] = true;
    report["iterations"] = res.iterations;
    report["residual"] = res.residual;
    report["a0"] = vec_json(res.a0);
    report["j0"] = vec_json(res.j0);
    report["trace"] = trace;
    write_text(report.dump(2) + "\n", out);
    if (!traj_out.empty()) emit_trajectory(res.trajectory, traj_out, format);
    return 0;
  } catch (const NoConvergence& e) {
    report["converged"] = false;
    report["iterations"] = e.iterations;
    report["residual"] = e.best_residual;
    report["message"] = e.what();
    write_text(report.dump(2) + "\n", out);
    return 1;
  }
}

// ---------------------------------------------------------------------------
// figure1

int cmd_figure1(const std::string& outdir) {
  namespace fs = std::filesystem;
  fs::create_directories(outdir);
  const MetricSpec flat3 = MetricSpec::flat_euclidean(3);
  CurveState init;
  init.x = Vec::Zero(3);
  init.u = fixed_vec3(1, 0, 0);
  init.a = fixed_vec3(0.1, 1, 0);
  const std::vector<double> times = uniform_times(0.0, 1.0, 200);
  IntegratorOptions opts;
  opts.abs_tol = opts.rel_tol = 1e-11;

  // Conformal geodesic through the data, the C = 0 spiral through the same
  // 2-jet, and an integral curve with C = e3 that leaves the plane.
  const Trajectory circle = integrate_cg3(flat3, init, times, opts);
  const Trajectory spiral =
      integrate_flat_cform(flat3, init, times, Vec(Vec::Zero(3)), opts);
  const Trajectory torsion =
      integrate_flat_cform(flat3, init, times, fixed_vec3(0, 0, 1), opts);

  const std::string paths[] = {outdir + "/figure1_circle.csv", outdir + "/figure1_spiral.csv",
                               outdir + "/figure1_torsion.csv"};
  save_trajectory(circle, paths[0], "csv");
  save_trajectory(spiral, paths[1], "csv");
  save_trajectory(torsion, paths[2], "csv");
  for (const std::string& p : paths) std::cout << p << "\n";
  return 0;
}

}  // namespace

// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
  CLI::App app{"confgeo: conformal geodesic flows, closed-form oracles, and invariant checks"};
  app.require_subcommand(1);
  int rc = 0;

  // integrate
  IntegrateFlags intf;
  CLI::App* integ = app.add_subcommand("integrate", "Integrate one of the curve flows");
  integ->add_option("--config", intf.config_path,
                    "JSON run configuration; explicit flags override its fields");
  CLI::Option* o_metric = integ->add_option("--metric", intf.metric,
                                            "flat-euclidean, flat-minkowski, "
                                            "round-sphere-stereographic, conformally-flat(expr)");
  CLI::Option* o_dim = integ->add_option("--dim", intf.dim, "dimension (default: from --ic)");
  CLI::Option* o_equation = integ->add_option(
      "--equation", intf.equation, "cg3, mercator4, flat-cform, geodesic, arclength-cg");
  CLI::Option* o_ic =
      integ->add_option("--ic", intf.ic, "initial data \"x;u;a[;j]\", components comma separated");
  CLI::Option* o_cvec = integ->add_option("--c-vector", intf.cvec,
                                          "conserved vector for the flat fourth order flow");
  CLI::Option* o_t0 = integ->add_option("--t0", intf.t0, "start time (default 0)");
  CLI::Option* o_t1 = integ->add_option("--t1", intf.t1, "end time (default 1)");
  CLI::Option* o_samples =
      integ->add_option("--samples", intf.samples, "output sample count (default 101)");
  CLI::Option* o_tol =
      integ->add_option("--tol", intf.tol, "integrator tolerance (default CONFGEO_DEFAULT_TOL)");
  CLI::Option* o_method = integ->add_option("--method", intf.method, "rkf45 or rk4");
  CLI::Option* o_out = integ->add_option("--out", intf.out, "output path, '-' for stdout");
  CLI::Option* o_format = integ->add_option("--format", intf.format, "csv or json");
  CLI::Option* o_path = integ->add_option(
      "--path", intf.path,
      "mercator4 route: auto (conserved-vector form on flat metrics), cform, generic");
  integ->callback([&]() {
    std::optional<CurveState> ic;
    std::optional<Vec> cvec;
    if (!intf.config_path.empty()) {
      const json j = load_json_file(intf.config_path);
      check_keys(j,
                 {"metric", "dim", "equation", "ic", "c_vector", "t0", "t1", "samples", "tol",
                  "method", "out", "format", "path"},
                 "run config");
      if (!o_metric->count() && j.contains("metric")) intf.metric = str_field(j, "metric");
      if (!o_dim->count() && j.contains("dim")) intf.dim = int_field(j, "dim");
      if (!o_equation->count() && j.contains("equation")) intf.equation = str_field(j, "equation");
      if (!o_t0->count() && j.contains("t0")) intf.t0 = num_field(j, "t0");
      if (!o_t1->count() && j.contains("t1")) intf.t1 = num_field(j, "t1");
      if (!o_samples->count() && j.contains("samples")) intf.samples = int_field(j, "samples");
      if (!o_tol->count() && j.contains("tol")) intf.tol = num_field(j, "tol");
      if (!o_method->count() && j.contains("method")) intf.method = str_field(j, "method");
      if (!o_out->count() && j.contains("out")) intf.out = str_field(j, "out");
      if (!o_format->count() && j.contains("format")) intf.format = str_field(j, "format");
      if (!o_path->count() && j.contains("path")) intf.path = str_field(j, "path");
      if (!o_ic->count() && j.contains("ic")) {
        const json& jic = j.at("ic");
        if (jic.is_string()) {
          ic = parse_ic(jic.get<std::string>());
        } else {
          check_keys(jic, {"x", "u", "a", "j"}, "'ic'");
          for (const char* key : {"x", "u", "a"})
            if (!jic.contains(key)) throw ConfigError(std::string("'ic' needs '") + key + "'");
          CurveState st;
          st.x = vec_from_json(jic.at("x"), "ic.x");
          st.u = vec_from_json(jic.at("u"), "ic.u");
          st.a = vec_from_json(jic.at("a"), "ic.a");
          if (jic.contains("j")) st.j = vec_from_json(jic.at("j"), "ic.j");
          ic = st;
        }
      }
      if (!o_cvec->count() && j.contains("c_vector")) {
        const json& jc = j.at("c_vector");
        cvec = jc.is_string() ? parse_vec(jc.get<std::string>())
                              : vec_from_json(jc, "c_vector");
      }
    }
    if (o_ic->count()) ic = parse_ic(intf.ic);
    if (o_cvec->count()) cvec = parse_vec(intf.cvec);
    rc = cmd_integrate(intf, ic, cvec);
  });

  // oracle
  CurveFlags orf;
  double or_t0 = 0.0, or_t1 = 1.0;
  int or_samples = 101;
  std::string or_out = "-", or_format = "csv";
  CLI::App* orc = app.add_subcommand("oracle", "Sample a closed-form solution family");
  orc->add_option("--kind", orf.kind, "circle or spiral")->required();
  orc->add_option("--x0", orf.x0, "circle: base point");
  orc->add_option("--u0", orf.u0, "circle: unit velocity");
  orc->add_option("--a0", orf.a0, "circle: quadratic coefficient, orthogonal to u0");
  orc->add_option("--p0", orf.p0, "spiral: first frame vector");
  orc->add_option("--q0", orf.q0, "spiral: second frame vector, |q0| = |p0|, <p0,q0> = 0");
  orc->add_option("--r0", orf.r0, "spiral: center offset");
  CLI::Option* or_c = orc->add_option("--c", orf.c, "spiral: pitch constant, nonzero");
  orc->add_option("--rate", orf.rate, "spiral: exponential rate (default 1)");
  orc->add_option("--through", orf.through, "spiral through a 2-jet \"x;u;a\"");
  orc->add_option("--t0", or_t0, "start time (default 0)");
  orc->add_option("--t1", or_t1, "end time (default 1)");
  orc->add_option("--samples", or_samples, "output sample count (default 101)");
  orc->add_option("--out", or_out, "output path, '-' for stdout");
  orc->add_option("--format", or_format, "csv or json");
  orc->callback([&]() {
    orf.c_given = or_c->count() > 0;
    rc = cmd_oracle(orf, or_t0, or_t1, or_samples, or_out, or_format);
  });

  // check
  std::string suite, check_out = "-";
  CLI::App* chk = app.add_subcommand("check", "Run a named invariant suite");
  chk->add_option("--suite", suite,
                  "invariance, first-integrals, tractor, theorem1, hamiltonian")
      ->required();
  chk->add_option("--out", check_out, "report path, '-' for stdout");
  chk->callback([&]() { rc = cmd_check(suite, check_out); });

  // vary
  CurveFlags vcf;
  VaryFlags vf;
  CLI::App* vary = app.add_subcommand("vary", "First variation of the action along a curve");
  vary->add_option("--metric", vf.metric, "metric name (default flat-euclidean)");
  vary->add_option("--dim", vf.dim, "dimension (default: from the curve)");
  vary->add_option("--curve", vcf.kind, "circle, spiral, or cubic");
  vary->add_option("--x0", vcf.x0, "circle: base point");
  vary->add_option("--u0", vcf.u0, "circle: unit velocity");
  vary->add_option("--a0", vcf.a0, "circle: quadratic coefficient");
  vary->add_option("--p0", vcf.p0, "spiral: first frame vector");
  vary->add_option("--q0", vcf.q0, "spiral: second frame vector");
  vary->add_option("--r0", vcf.r0, "spiral: center offset");
  CLI::Option* va_c = vary->add_option("--c", vcf.c, "spiral: pitch constant");
  vary->add_option("--rate", vcf.rate, "spiral: exponential rate (default 1)");
  vary->add_option("--through", vcf.through, "spiral through a 2-jet \"x;u;a\"");
  vary->add_option("--k0", vcf.k0, "cubic: constant coefficient");
  vary->add_option("--k1", vcf.k1, "cubic: linear coefficient");
  vary->add_option("--k2", vcf.k2, "cubic: quadratic coefficient (default 0)");
  vary->add_option("--k3", vcf.k3, "cubic: cubic coefficient (default 0)");
  vary->add_option("--t0", vf.t0, "start time (default 0)");
  vary->add_option("--t1", vf.t1, "end time (default 1)");
  vary->add_option("--bump-t0", vf.bump_t0, "bump support start (default 0.15)");
  vary->add_option("--bump-t1", vf.bump_t1, "bump support end (default 0.85)");
  vary->add_option("--direction", vf.direction, "variation direction vector")->required();
  vary->add_option("--mode", vf.mode, "bump mode 0 or 1 (default 0)");
  vary->add_option("--samples", vf.samples, "formula quadrature samples (default 801)");
  vary->add_option("--out", vf.out, "report path, '-' for stdout");
  vary->callback([&]() {
    vcf.c_given = va_c->count() > 0;
    rc = cmd_vary(vcf, vf);
  });

  // bvp
  std::string problem_path, bvp_out = "-", bvp_traj_out, bvp_format = "csv";
  CLI::App* bvp = app.add_subcommand("bvp", "Two-point boundary value problem by shooting");
  bvp->add_option("--problem", problem_path, "JSON problem file")->required();
  bvp->add_option("--out", bvp_out, "report path, '-' for stdout");
  bvp->add_option("--trajectory-out", bvp_traj_out, "optional solved trajectory path");
  bvp->add_option("--format", bvp_format, "trajectory format: csv or json");
  bvp->callback([&]() { rc = cmd_bvp(problem_path, bvp_out, bvp_traj_out, bvp_format); });

  // figure1
  std::string outdir = ".";
  CLI::App* fig = app.add_subcommand("figure1", "Emit the three reference trajectories");
  fig->add_option("--outdir", outdir, "output directory (default .)");
  fig->callback([&]() { rc = cmd_figure1(outdir); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const BadParams& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
