#include "confgeo/trajectory.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "confgeo/fd.hpp"

namespace confgeo {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Vec pack3(const CurveState& s) {
  const int n = s.dim();
  Vec y(3 * n);
  y.segment(0, n) = s.x;
  y.segment(n, n) = s.u;
  y.segment(2 * n, n) = s.a;
  return y;
}

Vec pack4(const CurveState& s) {
  const int n = s.dim();
  Vec y(4 * n);
  y.segment(0, n) = s.x;
  y.segment(n, n) = s.u;
  y.segment(2 * n, n) = s.a;
  y.segment(3 * n, n) = *s.j;
  return y;
}

CurveState unpack(const Vec& y, int n, bool with_jet) {
  CurveState s;
  s.x = y.segment(0, n);
  s.u = y.segment(n, n);
  s.a = with_jet || y.size() >= 3 * n ? Vec(y.segment(2 * n, n)) : Vec(Vec::Zero(n));
  if (with_jet) s.j = y.segment(3 * n, n);
  return s;
}

Trajectory make_trajectory(const MetricSpec& spec, const std::string& equation_id,
                           const std::vector<double>& times, const std::vector<Vec>& ys,
                           int n, bool with_jet, const IntegratorOptions& opts,
                           const StepStats& stats) {
  Trajectory traj;
  traj.t = times;
  traj.states.reserve(ys.size());
  for (const Vec& y : ys) traj.states.push_back(unpack(y, n, with_jet));
  traj.metric_id = spec.id;
  traj.equation_id = equation_id;
  traj.method = method_name(opts.method);
  traj.abs_tol = opts.abs_tol;
  traj.rel_tol = opts.rel_tol;
  traj.steps = stats;
  return traj;
}

}  // namespace

void write_csv(const Trajectory& traj, std::ostream& os) {
  if (traj.states.empty()) throw BadParams("write_csv: empty trajectory");
  const int n = traj.states.front().dim();
  const bool with_jet = traj.states.front().has_jet3();
  os << "t";
  for (int i = 0; i < n; ++i) os << ",x" << i;
  for (int i = 0; i < n; ++i) os << ",u" << i;
  for (int i = 0; i < n; ++i) os << ",a" << i;
  if (with_jet)
    for (int i = 0; i < n; ++i) os << ",j" << i;
  os << "\n";
  for (size_t k = 0; k < traj.states.size(); ++k) {
    const CurveState& s = traj.states[k];
    os << fmt17(traj.t[k]);
    for (int i = 0; i < n; ++i) os << "," << fmt17(s.x(i));
    for (int i = 0; i < n; ++i) os << "," << fmt17(s.u(i));
    for (int i = 0; i < n; ++i) os << "," << fmt17(s.a(i));
    if (with_jet)
      for (int i = 0; i < n; ++i) os << "," << fmt17((*s.j)(i));
    os << "\n";
  }
}

void write_json(const Trajectory& traj, std::ostream& os) {
  nlohmann::json j;
  j["metric"] = traj.metric_id;
  j["equation"] = traj.equation_id;
  j["method"] = traj.method;
  j["abs_tol"] = traj.abs_tol;
  j["rel_tol"] = traj.rel_tol;
  j["steps"] = {{"accepted", traj.steps.accepted}, {"rejected", traj.steps.rejected}};
  nlohmann::json samples = nlohmann::json::array();
  for (size_t k = 0; k < traj.states.size(); ++k) {
    const CurveState& s = traj.states[k];
    nlohmann::json row;
    row["t"] = traj.t[k];
    row["x"] = std::vector<double>(s.x.data(), s.x.data() + s.x.size());
    row["u"] = std::vector<double>(s.u.data(), s.u.data() + s.u.size());
    row["a"] = std::vector<double>(s.a.data(), s.a.data() + s.a.size());
    if (s.has_jet3())
      row["j"] = std::vector<double>(s.j->data(), s.j->data() + s.j->size());
    samples.push_back(row);
  }
  j["samples"] = samples;
  os << j.dump(2) << "\n";
}

void save_trajectory(const Trajectory& traj, const std::string& path,
                     const std::string& format) {
  std::ofstream os(path);
  if (!os) throw BadParams("cannot open output file: " + path);
  if (format == "csv")
    write_csv(traj, os);
  else if (format == "json")
    write_json(traj, os);
  else
    throw ConfigError("unknown output format: " + format);
}

Trajectory integrate_cg3(const MetricSpec& spec, const CurveState& init,
                         const std::vector<double>& times, const IntegratorOptions& opts,
                         const FdOptions& fd) {
  const int n = spec.dim;
  if (init.dim() != n) throw BadParams("integrate_cg3: state dimension mismatch");
  Flow flow = [&spec, &fd, n](double, const Vec& y) {
    CurveState s = unpack(y, n, false);
    const GeometryJet jet = geometry_jet(spec, s.x, JetLevel::Curvature, fd);
    const Cg3Deriv d = cg3_rhs(jet, s);
    Vec dy(3 * n);
    dy.segment(0, n) = d.dx;
    dy.segment(n, n) = d.du;
    dy.segment(2 * n, n) = d.da;
    return dy;
  };
  StepStats stats;
  const std::vector<Vec> ys = integrate_dense(flow, pack3(init), times, opts, &stats);
  return make_trajectory(spec, "cg3", times, ys, n, false, opts, stats);
}

Trajectory integrate_mercator4(const MetricSpec& spec, const CurveState& init,
                               const std::vector<double>& times,
                               const IntegratorOptions& opts, const FdOptions& fd) {
  const int n = spec.dim;
  if (init.dim() != n) throw BadParams("integrate_mercator4: state dimension mismatch");
  CurveState start = init;
  if (!start.has_jet3()) {
    const GeometryJet jet0 = geometry_jet(spec, start.x, JetLevel::Curvature, fd);
    const Cg3Deriv d0 = cg3_rhs(jet0, start);
    start.j = d0.da + jet0.gamma_quad(start.u, start.a);  // covariant jerk
  }
  Flow flow = [&spec, &fd, n](double, const Vec& y) {
    CurveState s = unpack(y, n, true);
    const GeometryJet jet = geometry_jet(spec, s.x, JetLevel::Full, fd);
    const Mercator4Deriv d = mercator4_rhs(spec, jet, s, fd);
    Vec dy(4 * n);
    dy.segment(0, n) = d.dx;
    dy.segment(n, n) = d.du;
    dy.segment(2 * n, n) = d.da;
    dy.segment(3 * n, n) = d.dj;
    return dy;
  };
  StepStats stats;
  const std::vector<Vec> ys = integrate_dense(flow, pack4(start), times, opts, &stats);
  return make_trajectory(spec, "mercator4", times, ys, n, true, opts, stats);
}

Trajectory integrate_flat_cform(const MetricSpec& spec, const CurveState& init,
                                const std::vector<double>& times, Vec c_vector,
                                const IntegratorOptions& opts) {
  const int n = spec.dim;
  if (spec.kind != MetricKind::Flat)
    throw BadParams("integrate_flat_cform: metric must be flat");
  if (init.dim() != n) throw BadParams("integrate_flat_cform: state dimension mismatch");
  const Vec sig = spec.signature.size() == n ? spec.signature : Vec(Vec::Ones(n));
  if (c_vector.size() == 0) c_vector = mercator_c(init, sig);
  if (c_vector.size() != n) throw BadParams("integrate_flat_cform: C dimension mismatch");
  Flow flow = [c_vector, sig, n](double, const Vec& y) {
    CurveState s = unpack(y, n, false);
    const Cg3Deriv d = flat_cform_rhs(s, c_vector, sig);
    Vec dy(3 * n);
    dy.segment(0, n) = d.dx;
    dy.segment(n, n) = d.du;
    dy.segment(2 * n, n) = d.da;
    return dy;
  };
  StepStats stats;
  const std::vector<Vec> ys = integrate_dense(flow, pack3(init), times, opts, &stats);
  return make_trajectory(spec, "flat-cform", times, ys, n, false, opts, stats);
}

Trajectory integrate_geodesic(const MetricSpec& spec, const CurveState& init,
                              const std::vector<double>& times,
                              const IntegratorOptions& opts, const FdOptions& fd) {
  const int n = spec.dim;
  if (init.x.size() != n || init.u.size() != n)
    throw BadParams("integrate_geodesic: state dimension mismatch");
  Flow flow = [&spec, &fd, n](double, const Vec& y) {
    const Vec x = y.segment(0, n);
    const Vec u = y.segment(n, n);
    const GeometryJet jet = geometry_jet(spec, x, JetLevel::Connection, fd);
    Vec dy(2 * n);
    dy.segment(0, n) = u;
    dy.segment(n, n) = -jet.gamma_quad(u, u);
    return dy;
  };
  Vec y0(2 * n);
  y0.segment(0, n) = init.x;
  y0.segment(n, n) = init.u;
  StepStats stats;
  const std::vector<Vec> ys = integrate_dense(flow, y0, times, opts, &stats);
  Trajectory traj;
  traj.t = times;
  for (const Vec& y : ys) {
    CurveState s;
    s.x = y.segment(0, n);
    s.u = y.segment(n, n);
    s.a = Vec::Zero(n);
    traj.states.push_back(s);
  }
  traj.metric_id = spec.id;
  traj.equation_id = "geodesic";
  traj.method = method_name(opts.method);
  traj.abs_tol = opts.abs_tol;
  traj.rel_tol = opts.rel_tol;
  traj.steps = stats;
  return traj;
}

Trajectory integrate_arclength_cg(const MetricSpec& spec, const CurveState& init,
                                  const std::vector<double>& times,
                                  const IntegratorOptions& opts, const FdOptions& fd) {
  const int n = spec.dim;
  if (init.dim() != n) throw BadParams("integrate_arclength_cg: state dimension mismatch");
  Flow flow = [&spec, &fd, n](double, const Vec& y) {
    CurveState s = unpack(y, n, false);
    const GeometryJet jet = geometry_jet(spec, s.x, JetLevel::Curvature, fd);
    const Cg3Deriv d = arclength_cg_rhs(jet, s);
    Vec dy(3 * n);
    dy.segment(0, n) = d.dx;
    dy.segment(n, n) = d.du;
    dy.segment(2 * n, n) = d.da;
    return dy;
  };
  StepStats stats;
  const std::vector<Vec> ys = integrate_dense(flow, pack3(init), times, opts, &stats);
  return make_trajectory(spec, "arclength-cg", times, ys, n, false, opts, stats);
}

CurveState jet_at(const MetricSpec& spec, const CurveModel& model, double t,
                  const FdOptions& fd) {
  const Vec x = model.x(t);
  const Vec dx = model.dx(t);
  const Vec d2x = model.d2x(t);
  const Vec d3x = model.d3x(t);
  const int n = static_cast<int>(x.size());
  const GeometryJet jet = geometry_jet(spec, x, JetLevel::Curvature, fd);
  CurveState s;
  s.x = x;
  s.u = dx;
  s.a = d2x + jet.gamma_quad(dx, dx);
  Vec j = d3x + 2.0 * jet.gamma_quad(d2x, dx) + jet.gamma_quad(dx, s.a);
  for (int a = 0; a < n; ++a) {
    double acc = 0.0;
    for (int e = 0; e < n; ++e)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) acc += jet.dgamma(e, a, b, c) * dx(e) * dx(b) * dx(c);
    j(a) += acc;
  }
  s.j = j;
  return s;
}

std::vector<CurveState> jets_along(const MetricSpec& spec, const CurveModel& model,
                                   const std::vector<double>& times, const FdOptions& fd) {
  std::vector<CurveState> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(jet_at(spec, model, t, fd));
  return out;
}

std::vector<CurveState> jets_from_positions(const MetricSpec& spec,
                                            const std::vector<double>& times,
                                            const std::vector<Vec>& xs, int points,
                                            const FdOptions& fd) {
  if (times.size() != xs.size()) throw BadParams("jets_from_positions: size mismatch");
  if (times.size() < static_cast<size_t>(points))
    throw BadParams("jets_from_positions: not enough samples for the stencil");
  const int n = static_cast<int>(xs.front().size());
  const int m = static_cast<int>(times.size());
  // Stencil-differentiate each coordinate, then attach the connection terms.
  std::vector<Vec> d1(m, Vec::Zero(n)), d2(m, Vec::Zero(n)), d3(m, Vec::Zero(n));
  for (int i = 0; i < n; ++i) {
    std::vector<double> coord(m);
    for (int k = 0; k < m; ++k) coord[k] = xs[k](i);
    const std::vector<double> c1 = confgeo::fd::derivative_samples(times, coord, 1, points);
    const std::vector<double> c2 = confgeo::fd::derivative_samples(times, coord, 2, points);
    const std::vector<double> c3 = confgeo::fd::derivative_samples(times, coord, 3, points);
    for (int k = 0; k < m; ++k) {
      d1[k](i) = c1[k];
      d2[k](i) = c2[k];
      d3[k](i) = c3[k];
    }
  }
  std::vector<CurveState> out(m);
  for (int k = 0; k < m; ++k) {
    const GeometryJet jet = geometry_jet(spec, xs[k], JetLevel::Curvature, fd);
    CurveState& s = out[k];
    s.x = xs[k];
    s.u = d1[k];
    s.a = d2[k] + jet.gamma_quad(d1[k], d1[k]);
    Vec j = d3[k] + 2.0 * jet.gamma_quad(d2[k], d1[k]) + jet.gamma_quad(d1[k], s.a);
    for (int a = 0; a < n; ++a) {
      double acc = 0.0;
      for (int e = 0; e < n; ++e)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            acc += jet.dgamma(e, a, b, c) * d1[k](e) * d1[k](b) * d1[k](c);
      j(a) += acc;
    }
    s.j = j;
  }
  return out;
}

Trajectory trajectory_from_model(const MetricSpec& spec, const CurveModel& model,
                                 const std::vector<double>& times,
                                 const std::string& equation_id, const FdOptions& fd) {
  Trajectory traj;
  traj.t = times;
  traj.states = jets_along(spec, model, times, fd);
  traj.metric_id = spec.id;
  traj.equation_id = equation_id;
  traj.method = "analytic";
  return traj;
}

}  // namespace confgeo
