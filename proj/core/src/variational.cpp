#include "confgeo/variational.hpp"

#include <algorithm>
#include <cmath>

#include "confgeo/fd.hpp"

namespace confgeo {

namespace {

// Smooth bump b(tau) = exp(-1/(1 - tau^2)) on (-1,1), zero outside, with
// first and second derivatives.  All derivatives vanish at tau = +-1.
struct Bump {
  double b = 0.0, db = 0.0, d2b = 0.0;
};

Bump bump_profile(double tau) {
  Bump out;
  const double m2 = 1.0 - tau * tau;
  if (m2 < 1e-8) return out;
  const double phi = -1.0 / m2;
  const double dphi = -2.0 * tau / (m2 * m2);
  const double d2phi = -2.0 / (m2 * m2) - 8.0 * tau * tau / (m2 * m2 * m2);
  out.b = std::exp(phi);
  out.db = dphi * out.b;
  out.d2b = (d2phi + dphi * dphi) * out.b;
  return out;
}

}  // namespace

VariationField bump_variation(double t0, double t1, const Vec& direction, int mode) {
  if (t1 <= t0) throw BadParams("bump_variation: need t1 > t0");
  if (mode != 0 && mode != 1) throw BadParams("bump_variation: mode must be 0 or 1");
  const double mid = 0.5 * (t0 + t1);
  const double half = 0.5 * (t1 - t0);
  const Vec dir = direction;
  auto eval = [mid, half, dir, mode](double t, int order) {
    const double tau = (t - mid) / half;
    const Bump b = bump_profile(tau);
    // Chain rule factors for d/dt = (1/half) d/dtau.
    double f, df, d2f;
    if (mode == 0) {
      f = b.b;
      df = b.db;
      d2f = b.d2b;
    } else {  // odd bump: tau * b(tau)
      f = tau * b.b;
      df = b.b + tau * b.db;
      d2f = 2.0 * b.db + tau * b.d2b;
    }
    const double s = order == 0 ? f : order == 1 ? df / half : d2f / (half * half);
    return Vec(s * dir);
  };
  VariationField v;
  v.v = [eval](double t) { return eval(t, 0); };
  v.dv = [eval](double t) { return eval(t, 1); };
  v.d2v = [eval](double t) { return eval(t, 2); };
  return v;
}

double functional_I(const MetricSpec& spec, const std::vector<double>& ts,
                    const std::vector<CurveState>& states, const FdOptions& fd) {
  if (ts.size() != states.size()) throw BadParams("functional_I: size mismatch");
  std::vector<double> ell(ts.size());
  for (size_t i = 0; i < ts.size(); ++i) {
    const GeometryJet jet = geometry_jet(spec, states[i].x, JetLevel::Curvature, fd);
    ell[i] = lagrangian_L(jet, states[i]);
  }
  return fd::simpson(ts, ell);
}

double functional_I(const MetricSpec& spec, const CurveModel& model, double t0, double t1,
                    int samples, const FdOptions& fd) {
  if (samples % 2 == 0) ++samples;  // Simpson needs an odd sample count
  const std::vector<double> ts = uniform_times(t0, t1, samples - 1);
  return functional_I(spec, ts, jets_along(spec, model, ts, fd), fd);
}

double perturbed_functional(const MetricSpec& spec, const CurveModel& model,
                            const VariationField& var, double s, double t0, double t1,
                            int samples, const FdOptions& fd) {
  if (samples % 2 == 0) ++samples;  // Simpson needs an odd sample count
  const std::vector<double> ts = uniform_times(t0, t1, samples - 1);
  std::vector<double> ell(ts.size());
  double phi0 = 0.0, phi1 = 0.0;
  for (size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    CurveState st;
    st.x = model.x(t) + s * var.v(t);
    st.u = model.dx(t) + s * var.dv(t);
    const GeometryJet jet = geometry_jet(spec, st.x, JetLevel::Curvature, fd);
    st.a = model.d2x(t) + s * var.d2v(t) + jet.gamma_quad(st.u, st.u);
    ell[i] = lagrangian_L1(jet, st);
    const double phi = jet.inner(st.u, st.a) / checked_norm2(jet, st.u);
    if (i == 0) phi0 = phi;
    if (i + 1 == ts.size()) phi1 = phi;
  }
  return fd::simpson(ts, ell) + phi1 - phi0;
}

DopJet d_op_jet(const MetricSpec& spec, const CurveModel& model, const VariationField& var,
                double t, const FdOptions& fd) {
  const Vec x = model.x(t);
  const Vec u = model.dx(t);    // coordinate velocity
  const Vec ddx = model.d2x(t);  // coordinate acceleration
  const GeometryJet jet = geometry_jet(spec, x, JetLevel::Curvature, fd);
  const int n = jet.n;

  // Covariant base-curve jets.
  const Vec a = ddx + jet.gamma_quad(u, u);
  Vec j = model.d3x(t) + 2.0 * jet.gamma_quad(ddx, u) + jet.gamma_quad(u, a);
  for (int ai = 0; ai < n; ++ai) {
    double acc = 0.0;
    for (int e = 0; e < n; ++e)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) acc += jet.dgamma(e, ai, b, c) * u(e) * u(b) * u(c);
    j(ai) += acc;
  }

  const Vec v = var.v(t);
  const Vec dv = var.dv(t);
  const Vec d2v = var.d2v(t);

  // nabla_U V and nabla_U nabla_U V from coordinate derivatives.
  const Vec cov1 = dv + jet.gamma_quad(u, v);
  Vec dcov1 = d2v + jet.gamma_quad(ddx, v) + jet.gamma_quad(u, dv);
  for (int ai = 0; ai < n; ++ai) {
    double acc = 0.0;
    for (int e = 0; e < n; ++e)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) acc += jet.dgamma(e, ai, b, c) * u(e) * u(b) * v(c);
    dcov1(ai) += acc;
  }
  const Vec cov2 = dcov1 + jet.gamma_quad(u, cov1);

  const double u2 = checked_norm2(jet, u);
  const double s1 = jet.inner(a, v);
  const double s2 = jet.inner(u, v);
  const double s3 = jet.inner(a, u);

  DopJet out;
  out.v = v;
  out.dv_op = cov1 + (s1 * u - s2 * a - s3 * v) / u2;

  // Covariant time derivatives of the scalar coefficients.
  const double ds1 = jet.inner(j, v) + jet.inner(a, cov1);
  const double ds2 = s1 + jet.inner(u, cov1);
  const double ds3 = jet.inner(j, u) + jet.norm2(a);
  const double du2 = 2.0 * s3;

  const Vec grad_q = (ds1 / u2 - s1 * du2 / (u2 * u2)) * u + (s1 / u2) * a -
                     ((ds2 / u2 - s2 * du2 / (u2 * u2)) * a + (s2 / u2) * j) -
                     ((ds3 / u2 - s3 * du2 / (u2 * u2)) * v + (s3 / u2) * cov1);
  const Vec cov_dv_op = cov2 + grad_q;  // nabla_U D(V)

  const double p1 = jet.inner(a, out.dv_op);
  const double p2 = jet.inner(u, out.dv_op);
  out.d2v_op = cov_dv_op + (p1 * u - p2 * a - s3 * out.dv_op) / u2;
  return out;
}

namespace {

struct CurveJets {
  CurveState state;
  GeometryJet jet;
};

CurveJets full_jet_at(const MetricSpec& spec, const CurveModel& model, double t,
                      const FdOptions& fd) {
  CurveJets out{jet_at(spec, model, t, fd), geometry_jet(spec, model.x(t), JetLevel::Full, fd)};
  return out;
}

double boundary_b(const MetricSpec& spec, const CurveModel& model,
                  const VariationField& var, double t, const FdOptions& fd) {
  const CurveJets cj = full_jet_at(spec, model, t, fd);
  const DopJet dj = d_op_jet(spec, model, var, t, fd);
  const Vec e = e_vector(cj.jet, cj.state);
  const double u2 = checked_norm2(cj.jet, cj.state.u);
  const double l = cj.jet.inner(cj.state.u, e) / u2;
  const Vec f2 = e - 2.0 * l * cj.state.u;
  return (cj.jet.inner(cj.state.u, dj.d2v_op) - cj.jet.inner(f2, dj.v)) / u2;
}

}  // namespace

double boundary_term(const MetricSpec& spec, const CurveModel& model,
                     const VariationField& var, double t, const FdOptions& fd) {
  return boundary_b(spec, model, var, t, fd);
}

FirstVariation first_variation_formula(const MetricSpec& spec, const CurveModel& model,
                                       const VariationField& var, double t0, double t1,
                                       int samples, const FdOptions& fd) {
  if (samples % 2 == 0) ++samples;
  const std::vector<double> ts = uniform_times(t0, t1, samples - 1);
  std::vector<double> integrand(ts.size());
  for (size_t i = 0; i < ts.size(); ++i) {
    const CurveJets cj = full_jet_at(spec, model, ts[i], fd);
    const DopJet dj = d_op_jet(spec, model, var, ts[i], fd);
    const Vec e = e_vector(cj.jet, cj.state);
    const double u2 = checked_norm2(cj.jet, cj.state.u);
    const double l = cj.jet.inner(cj.state.u, e) / u2;
    const Vec f2 = e - 2.0 * l * cj.state.u;
    const Vec k = k_vector(cj.jet, cj.state);
    integrand[i] = (cj.jet.inner(k, dj.v) - cj.jet.inner(f2, dj.dv_op)) / u2;
  }
  FirstVariation out;
  out.integral_term = fd::simpson(ts, integrand);
  out.boundary_term =
      boundary_b(spec, model, var, t1, fd) - boundary_b(spec, model, var, t0, fd);
  return out;
}

double first_variation_fd(const MetricSpec& spec, const CurveModel& model,
                          const VariationField& var, double t0, double t1,
                          const FdVariationOptions& opts, const FdOptions& fd) {
  if (opts.grid < 2 * opts.stencil + 1)
    throw BadParams("first_variation_fd: grid too coarse for the stencil");
  const std::vector<double> ts = uniform_times(t0, t1, opts.grid - 1);
  std::vector<Vec> base(ts.size()), vs(ts.size());
  for (size_t i = 0; i < ts.size(); ++i) {
    base[i] = model.x(ts[i]);
    vs[i] = var.v(ts[i]);
  }
  auto value_at = [&](double s) {
    std::vector<Vec> xs(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) xs[i] = base[i] + s * vs[i];
    try {
      const std::vector<CurveState> jets =
          jets_from_positions(spec, ts, xs, opts.stencil, fd);
      return functional_I(spec, ts, jets, fd);
    } catch (const ZeroFactor& e) {
      throw PatchExit(std::string("first_variation_fd: perturbed curve left the patch: ") +
                      e.what());
    } catch (const SingularMetric& e) {
      throw PatchExit(std::string("first_variation_fd: perturbed curve left the patch: ") +
                      e.what());
    }
  };
  const double s = opts.s;
  const double d1 = (value_at(s) - value_at(-s)) / (2.0 * s);
  if (!opts.richardson) return d1;
  const double d2 = (value_at(0.5 * s) - value_at(-0.5 * s)) / s;
  return (4.0 * d2 - d1) / 3.0;
}

StationarityReport stationarity_check(const MetricSpec& spec, const CurveModel& model,
                                      double t0, double t1, double tolerance,
                                      int samples, const FdOptions& fd) {
  const int n = spec.dim;
  StationarityReport rep;
  for (int mode = 0; mode <= 1; ++mode)
    for (int k = 0; k < n; ++k) {
      Vec dir = Vec::Zero(n);
      dir(k) = 1.0;
      const VariationField var = bump_variation(t0, t1, dir, mode);
      const FirstVariation fv =
          first_variation_formula(spec, model, var, t0, t1, samples, fd);
      rep.variations.push_back(fv.total());
    }
  for (size_t i = 0; i < rep.variations.size(); ++i) {
    if (std::abs(rep.variations[i]) > rep.max_abs_variation) {
      rep.max_abs_variation = std::abs(rep.variations[i]);
      rep.witness_index = static_cast<int>(i);
    }
  }
  rep.stationary = rep.max_abs_variation <= tolerance;
  return rep;
}

BvpResult bvp_shoot(const BvpProblem& problem, Vec a0_guess, Vec j0_guess,
                    const BvpOptions& opts, const IntegratorOptions& iopts,
                    const FdOptions& fd) {
  const int n = problem.metric.dim;
  if (problem.t1 == problem.t0) throw BadParams("bvp_shoot: t1 must differ from t0");
  if (problem.x0.size() != n || problem.x1.size() != n || problem.u0.size() != n ||
      problem.u1.size() != n)
    throw BadParams("bvp_shoot: endpoint dimension mismatch");
  if ((problem.x1 - problem.x0).norm() < 1e-14)
    throw BadParams("bvp_shoot: endpoints must be distinct");
  if (problem.u0.norm() < 1e-14 || problem.u1.norm() < 1e-14)
    throw BadParams("bvp_shoot: end tangents must be nonzero");
  if (a0_guess.size() == 0) a0_guess = Vec::Zero(n);
  if (j0_guess.size() == 0) j0_guess = Vec::Zero(n);

  const std::vector<double> endpoint_times{problem.t0, problem.t1};
  auto residual = [&](const Vec& z) {
    CurveState init;
    init.x = problem.x0;
    init.u = problem.u0;
    init.a = z.segment(0, n);
    init.j = z.segment(n, n);
    const Trajectory traj =
        integrate_mercator4(problem.metric, init, endpoint_times, iopts, fd);
    const CurveState& fin = traj.states.back();
    Vec r(2 * n);
    r.segment(0, n) = fin.x - problem.x1;
    r.segment(n, n) = fin.u - problem.u1;
    return r;
  };

  Vec z(2 * n);
  z.segment(0, n) = a0_guess;
  z.segment(n, n) = j0_guess;
  Vec r = residual(z);
  double lambda = opts.initial_damping;
  BvpResult result;
  int iter = 0;
  result.trace.push_back({0, r.norm(), lambda});
  while (r.norm() >= opts.tolerance) {
    if (iter >= opts.max_iterations)
      throw NoConvergence("bvp_shoot: iteration budget exhausted", iter, r.norm());
    ++iter;
    Mat jac(2 * n, 2 * n);
    for (int c = 0; c < 2 * n; ++c) {
      Vec zp = z, zm = z;
      zp(c) += opts.jacobian_step;
      zm(c) -= opts.jacobian_step;
      jac.col(c) = (residual(zp) - residual(zm)) / (2.0 * opts.jacobian_step);
    }
    const Mat jtj = jac.transpose() * jac;
    const Vec jtr = jac.transpose() * r;
    bool accepted = false;
    for (int tries = 0; tries < 25 && !accepted; ++tries) {
      const Mat lhs = jtj + lambda * Mat::Identity(2 * n, 2 * n);
      const Vec step = Eigen::LDLT<Mat>(lhs).solve(-jtr);
      const Vec z_try = z + step;
      const Vec r_try = residual(z_try);
      if (r_try.norm() < r.norm()) {
        z = z_try;
        r = r_try;
        lambda = std::max(lambda / 3.0, 1e-14);
        accepted = true;
      } else {
        lambda *= 4.0;
        if (lambda > 1e14)
          throw NoConvergence("bvp_shoot: damping blow-up", iter, r.norm());
      }
    }
    if (!accepted)
      throw NoConvergence("bvp_shoot: no acceptable step", iter, r.norm());
    result.trace.push_back({iter, r.norm(), lambda});
  }

  CurveState init;
  init.x = problem.x0;
  init.u = problem.u0;
  init.a = z.segment(0, n);
  init.j = z.segment(n, n);
  result.trajectory = integrate_mercator4(
      problem.metric, init, uniform_times(problem.t0, problem.t1, opts.output_samples - 1),
      iopts, fd);
  result.a0 = init.a;
  result.j0 = *init.j;
  result.iterations = iter;
  result.residual = r.norm();
  return result;
}

}  // namespace confgeo
