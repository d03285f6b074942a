#include "confgeo/dynamics.hpp"

#include <cmath>

#include "confgeo/fd.hpp"

namespace confgeo {

namespace {

void require_jet3(const CurveState& state, const char* who) {
  if (!state.has_jet3()) throw BadParams(std::string(who) + ": state must carry the 3-jet (J)");
}

}  // namespace

Vec e_vector(const GeometryJet& jet, const CurveState& state) {
  require_jet3(state, "e_vector");
  const Vec& u = state.u;
  const Vec& a = state.a;
  const Vec& j = *state.j;
  const double u2 = checked_norm2(jet, u);
  const double ua = jet.inner(u, a);
  const double a2 = jet.norm2(a);
  return j - 3.0 * ua / u2 * a + 1.5 * a2 / u2 * u - u2 * jet.schouten_sharp(u) +
         2.0 * jet.schouten_q(u, u) * u;
}

double lagrangian_L(const GeometryJet& jet, const CurveState& state) {
  const Vec e = e_vector(jet, state);
  return jet.inner(state.u, e) / checked_norm2(jet, state.u);
}

double lagrangian_L1(const GeometryJet& jet, const CurveState& state) {
  const double u2 = checked_norm2(jet, state.u);
  const double ua = jet.inner(state.u, state.a);
  const double a2 = jet.norm2(state.a);
  return 0.5 * a2 / u2 - ua * ua / (u2 * u2) + jet.schouten_q(state.u, state.u);
}

Vec k_vector(const GeometryJet& jet, const CurveState& state) {
  if (jet.level != JetLevel::Full)
    throw BadParams("k_vector needs JetLevel::Full (nabla P)");
  const int n = jet.n;
  const Vec& u = state.u;
  const Vec& a = state.a;
  const double u2 = checked_norm2(jet, u);
  Vec k_low = Vec::Zero(n);
  // Weyl part: K_c += W_abcd A^a U^b U^d  (riemann_low slot order)
  for (int c = 0; c < n; ++c) {
    double acc = 0.0;
    for (int ai = 0; ai < n; ++ai)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d)
          acc += jet.weyl_low(ai, b, c, d) * a(ai) * u(b) * u(d);
    k_low(c) = acc;
  }
  // Cotton part: K_c -= |U|^2 (nabla_c P_ab - nabla_a P_cb) U^a U^b
  for (int c = 0; c < n; ++c) {
    double acc = 0.0;
    for (int ai = 0; ai < n; ++ai)
      for (int b = 0; b < n; ++b)
        acc += (jet.grad_schouten(c, ai, b) - jet.grad_schouten(ai, c, b)) * u(ai) * u(b);
    k_low(c) -= u2 * acc;
  }
  return jet.g_inv * k_low;
}

Vec d_op(const GeometryJet& jet, const CurveState& state, const Vec& v, const Vec& dv_cov) {
  const Vec& u = state.u;
  const Vec& a = state.a;
  const double u2 = checked_norm2(jet, u);
  return dv_cov +
         (jet.inner(a, v) * u - jet.inner(u, v) * a - jet.inner(a, u) * v) / u2;
}

Vec d_star(const GeometryJet& jet, const CurveState& state, const Vec& w, const Vec& dw_cov) {
  const Vec& u = state.u;
  const Vec& a = state.a;
  const double u2 = checked_norm2(jet, u);
  return -dw_cov +
         (jet.inner(u, w) * a - jet.inner(a, w) * u - jet.inner(a, u) * w) / u2;
}

Vec mercator_f(const GeometryJet& jet, const CurveState& state) {
  const Vec e = e_vector(jet, state);
  const double u2 = checked_norm2(jet, state.u);
  const double l = jet.inner(state.u, e) / u2;
  return (e - 2.0 * l * state.u) / u2;
}

namespace {

Vec mercator_c_impl(const CurveState& state, const Vec& sig) {
  require_jet3(state, "mercator_c");
  const Vec& u = state.u;
  const Vec& a = state.a;
  const Vec& j = *state.j;
  auto ip = [&sig](const Vec& p, const Vec& q) { return p.dot(sig.asDiagonal() * q); };
  const double u2 = ip(u, u);
  if (std::abs(u2) < 1e-12) throw NullVelocity("mercator_c: |U|^2 = 0");
  const double a2 = ip(a, a);
  const double ua = ip(u, a);
  const double ju = ip(j, u);
  return (j - a2 / u2 * u - 2.0 * ua / u2 * a + 4.0 * ua * ua / (u2 * u2) * u -
          2.0 * ju / u2 * u) /
         u2;
}

}  // namespace

Vec mercator_c(const CurveState& state) {
  return mercator_c_impl(state, Vec::Ones(state.dim()));
}

Vec mercator_c(const CurveState& state, const Vec& signature) {
  return mercator_c_impl(state, signature);
}

Cg3Deriv cg3_rhs(const GeometryJet& jet, const CurveState& state) {
  const Vec& u = state.u;
  const Vec& a = state.a;
  const double u2 = checked_norm2(jet, u);
  const double ua = jet.inner(u, a);
  const double a2 = jet.norm2(a);
  // E = 0 solved for nabla_U A
  const Vec j_cov = 3.0 * ua / u2 * a - 1.5 * a2 / u2 * u + u2 * jet.schouten_sharp(u) -
                    2.0 * jet.schouten_q(u, u) * u;
  Cg3Deriv d;
  d.dx = u;
  d.du = a - jet.gamma_quad(u, u);
  d.da = j_cov - jet.gamma_quad(u, a);
  return d;
}

Cg3Deriv arclength_cg_rhs(const GeometryJet& jet, const CurveState& state) {
  const Vec& u = state.u;
  const Vec& a = state.a;
  const double a2 = jet.norm2(a);
  const Vec j_cov =
      -(a2 + jet.schouten_q(u, u)) * u + jet.schouten_sharp(u);
  Cg3Deriv d;
  d.dx = u;
  d.du = a - jet.gamma_quad(u, u);
  d.da = j_cov - jet.gamma_quad(u, a);
  return d;
}

namespace {

Vec assemble_f(const MetricSpec& spec, const Vec& x, const Vec& u, const Vec& a,
               const Vec& j, const GeometryJet* jet_at_x, const FdOptions& fd) {
  CurveState s;
  s.x = x;
  s.u = u;
  s.a = a;
  s.j = j;
  if (jet_at_x != nullptr) return mercator_f(*jet_at_x, s);
  GeometryJet jet = geometry_jet(spec, x, JetLevel::Curvature, fd);
  return mercator_f(jet, s);
}

}  // namespace

Mercator4Deriv mercator4_rhs(const MetricSpec& spec, const GeometryJet& jet,
                             const CurveState& state, const FdOptions& fd) {
  require_jet3(state, "mercator4_rhs");
  const int n = jet.n;
  const Vec& u = state.u;
  const Vec& a = state.a;
  const Vec& j = *state.j;
  const double u2 = checked_norm2(jet, u);

  Mercator4Deriv d;
  d.dx = u;
  d.du = a - jet.gamma_quad(u, u);
  d.da = j - jet.gamma_quad(u, a);

  const Vec f = mercator_f(jet, state);

  // Jacobians of the F assembler by central differences.  x-derivatives need
  // neighbouring geometry jets and vanish in a flat chart.
  const double hj = 1e-6;
  Mat fx = Mat::Zero(n, n);
  if (!spec.is_flat()) {
    for (int c = 0; c < n; ++c) {
      Vec xp = state.x, xm = state.x;
      xp(c) += hj;
      xm(c) -= hj;
      fx.col(c) = (assemble_f(spec, xp, u, a, j, nullptr, fd) -
                   assemble_f(spec, xm, u, a, j, nullptr, fd)) /
                  (2.0 * hj);
    }
  }
  auto fd_block = [&](const Vec& base, auto rebuild) {
    Mat out(n, n);
    for (int c = 0; c < n; ++c) {
      Vec p = base, m = base;
      p(c) += hj;
      m(c) -= hj;
      out.col(c) = (rebuild(p) - rebuild(m)) / (2.0 * hj);
    }
    return out;
  };
  Mat fu = fd_block(u, [&](const Vec& v) { return assemble_f(spec, state.x, v, a, j, &jet, fd); });
  Mat fa = fd_block(a, [&](const Vec& v) { return assemble_f(spec, state.x, u, v, j, &jet, fd); });
  Mat fj = fd_block(j, [&](const Vec& v) { return assemble_f(spec, state.x, u, a, v, &jet, fd); });

  // Equation: -nabla_U F + (<U,F> A - <A,F> U - <A,U> F)/|U|^2 - K/|U|^2 = 0
  // with nabla_U F = F_x dx + F_u du + F_a da + F_j dJ + Gamma(U, F).
  Vec rest = fx * d.dx + fu * d.du + fa * d.da + jet.gamma_quad(u, f);
  Vec alg = (jet.inner(u, f) * a - jet.inner(a, f) * u - jet.inner(a, u) * f) / u2;
  Vec k = spec.is_flat() ? Vec(Vec::Zero(n)) : k_vector(jet, state);
  Vec rhs = alg - k / u2 - rest;

  // F_j is (Id - 2 Uhat Uhat)/|U|^2, an invertible reflection; solve directly.
  Eigen::PartialPivLU<Mat> lu(fj);
  Vec dj = lu.solve(rhs);
  if ((fj * dj - rhs).norm() > 1e-6 * (1.0 + rhs.norm()))
    throw NumericalError("mercator4_rhs: jerk system solve failed (singular F_J?)");
  d.dj = dj;
  return d;
}

namespace {

Cg3Deriv flat_cform_impl(const CurveState& state, const Vec& c_vec, const Vec& sig) {
  auto ip = [&sig](const Vec& p, const Vec& q) { return p.dot(sig.asDiagonal() * q); };
  const Vec& u = state.u;
  const Vec& a = state.a;
  const double u2 = ip(u, u);
  if (std::abs(u2) < 1e-12) throw NullVelocity("flat_cform_rhs: |U|^2 = 0");
  const double a2 = ip(a, a);
  const double ua = ip(u, a);
  const double cu = ip(c_vec, u);
  Cg3Deriv d;
  d.dx = u;
  d.du = a;
  d.da = -a2 / u2 * u + 2.0 * ua / u2 * a - 2.0 * cu * u + u2 * c_vec;
  return d;
}

}  // namespace

Cg3Deriv flat_cform_rhs(const CurveState& state, const Vec& c_vec) {
  return flat_cform_impl(state, c_vec, Vec::Ones(state.dim()));
}

Cg3Deriv flat_cform_rhs(const CurveState& state, const Vec& c_vec, const Vec& signature) {
  return flat_cform_impl(state, c_vec, signature);
}

Vec flat_jerk_from_c(const CurveState& state, const Vec& c_vec) {
  return flat_cform_rhs(state, c_vec).da;
}

Vec flat_jerk_from_c(const CurveState& state, const Vec& c_vec, const Vec& signature) {
  return flat_cform_rhs(state, c_vec, signature).da;
}

}  // namespace confgeo
