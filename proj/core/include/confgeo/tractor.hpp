#pragma once

#include <functional>

#include "confgeo/geometry.hpp"
#include "confgeo/trajectory.hpp"
#include "confgeo/types.hpp"

namespace confgeo {

// Tractor in a fixed scale g: scalar slot sigma (weight +1), vector slot mu
// (weight -1), scalar slot rho (weight -1), attached at base point x.
struct Tractor {
  double sigma = 0.0;
  Vec mu;
  double rho = 0.0;
  Vec x;
};

// Fibre metric <T,T> = |mu|^2_g + 2 sigma rho; invariant under
// tractor_transform with any covector Upsilon.
double tractor_norm(const GeometryJet& jet, const Tractor& t);
double tractor_inner(const GeometryJet& jet, const Tractor& s, const Tractor& t);

// Change-of-scale law (Upsilon given by its covector components):
//   sigma -> sigma, mu -> mu + sigma Upsilon#, rho -> rho - Upsilon(mu)
//   - (1/2)|Upsilon|^2 sigma.
Tractor tractor_transform(const GeometryJet& jet, const Tractor& t, const Vec& upsilon);

// Coupled connection contracted with the curve velocity:
//   D_U (sigma, mu, rho) = (dsigma/dt - <mu,U>,
//                           nabla_U mu + rho U + sigma P#(U),
//                           drho/dt - P(U, mu)).
// dmu_coord is the coordinate derivative of mu along the curve; the
// Christoffel correction is applied internally.
Tractor tractor_connection_derivative(const GeometryJet& jet, const CurveState& state,
                                      const Tractor& t, double dsigma,
                                      const Vec& dmu_coord, double drho);

// Velocity tractor (0, U/|U|, -<U,A>/|U|^3); unit norm by construction.
Tractor velocity_tractor(const GeometryJet& jet, const CurveState& state);

// Acceleration tractor A = D_U (velocity tractor), expanded analytically:
//   sigma = -|U|
//   mu    = A/|U| - 2<U,A> U / |U|^3
//   rho   = -(|A|^2 + <U,J>)/|U|^3 + 3<U,A>^2/|U|^5 - P(U,U)/|U|
// Requires the 3-jet.
Tractor acceleration_tractor(const GeometryJet& jet, const CurveState& state);

// (1/2)<A,A>_T; equals the third-order Lagrangian density L.
double tractor_kinetic_energy(const GeometryJet& jet, const CurveState& state);

// Derivative of a sampled tractor field along a model curve: slot-wise
// fourth-order central differences fed through the connection formula.
using TractorField = std::function<Tractor(double)>;
Tractor tractor_field_derivative(const MetricSpec& spec, const CurveModel& curve,
                                 const TractorField& field, double t, double h = 1e-3,
                                 const FdOptions& fd = {});

}  // namespace confgeo
