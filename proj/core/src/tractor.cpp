#include "confgeo/tractor.hpp"

#include <cmath>

namespace confgeo {

double tractor_norm(const GeometryJet& jet, const Tractor& t) {
  return jet.norm2(t.mu) + 2.0 * t.sigma * t.rho;
}

double tractor_inner(const GeometryJet& jet, const Tractor& s, const Tractor& t) {
  return jet.inner(s.mu, t.mu) + s.sigma * t.rho + t.sigma * s.rho;
}

Tractor tractor_transform(const GeometryJet& jet, const Tractor& t, const Vec& upsilon) {
  if (upsilon.size() != jet.n) throw BadParams("tractor_transform: Upsilon dimension");
  const Vec up_sharp = jet.g_inv * upsilon;
  const double up2 = upsilon.dot(up_sharp);
  Tractor out;
  out.sigma = t.sigma;
  out.mu = t.mu + t.sigma * up_sharp;
  out.rho = t.rho - upsilon.dot(t.mu) - 0.5 * up2 * t.sigma;
  out.x = t.x;
  return out;
}

Tractor tractor_connection_derivative(const GeometryJet& jet, const CurveState& state,
                                      const Tractor& t, double dsigma,
                                      const Vec& dmu_coord, double drho) {
  const Vec& u = state.u;
  const Vec mu_cov = dmu_coord + jet.gamma_quad(u, t.mu);  // nabla_U mu
  Tractor out;
  out.sigma = dsigma - jet.inner(t.mu, u);
  out.mu = mu_cov + t.rho * u + t.sigma * jet.schouten_sharp(u);
  out.rho = drho - jet.schouten_q(u, t.mu);
  out.x = state.x;
  return out;
}

Tractor velocity_tractor(const GeometryJet& jet, const CurveState& state) {
  const double u2 = checked_norm2(jet, state.u);
  const double un = std::sqrt(u2);
  Tractor t;
  t.sigma = 0.0;
  t.mu = state.u / un;
  t.rho = -jet.inner(state.u, state.a) / (u2 * un);
  t.x = state.x;
  return t;
}

Tractor acceleration_tractor(const GeometryJet& jet, const CurveState& state) {
  if (!state.has_jet3())
    throw BadParams("acceleration_tractor: state must carry the 3-jet (J)");
  const Vec& u = state.u;
  const Vec& a = state.a;
  const Vec& j = *state.j;
  const double u2 = checked_norm2(jet, u);
  const double un = std::sqrt(u2);
  const double ua = jet.inner(u, a);
  const double a2 = jet.norm2(a);
  Tractor t;
  t.sigma = -un;
  t.mu = a / un - 2.0 * ua / (u2 * un) * u;
  t.rho = -(a2 + jet.inner(u, j)) / (u2 * un) + 3.0 * ua * ua / (u2 * u2 * un) -
          jet.schouten_q(u, u) / un;
  t.x = state.x;
  return t;
}

double tractor_kinetic_energy(const GeometryJet& jet, const CurveState& state) {
  const Tractor a = acceleration_tractor(jet, state);
  return 0.5 * tractor_norm(jet, a);
}

Tractor tractor_field_derivative(const MetricSpec& spec, const CurveModel& curve,
                                 const TractorField& field, double t, double h,
                                 const FdOptions& fd) {
  // Fourth-order central differences of each slot.
  const Tractor tm2 = field(t - 2.0 * h), tm1 = field(t - h);
  const Tractor tp1 = field(t + h), tp2 = field(t + 2.0 * h);
  const Tractor at = field(t);
  const double dsigma =
      (-tp2.sigma + 8.0 * tp1.sigma - 8.0 * tm1.sigma + tm2.sigma) / (12.0 * h);
  const Vec dmu = (-tp2.mu + 8.0 * tp1.mu - 8.0 * tm1.mu + tm2.mu) / (12.0 * h);
  const double drho = (-tp2.rho + 8.0 * tp1.rho - 8.0 * tm1.rho + tm2.rho) / (12.0 * h);
  const CurveState state = jet_at(spec, curve, t, fd);
  const GeometryJet jet = geometry_jet(spec, state.x, JetLevel::Curvature, fd);
  return tractor_connection_derivative(jet, state, at, dsigma, dmu, drho);
}

}  // namespace confgeo
