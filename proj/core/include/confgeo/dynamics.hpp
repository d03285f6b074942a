#pragma once

#include "confgeo/geometry.hpp"
#include "confgeo/types.hpp"

namespace confgeo {

// Third-order conformal geodesic operator, zero on conformal geodesics:
//   E = nabla_U A - 3<U,A> A / |U|^2 + 3|A|^2 U / (2|U|^2)
//       - |U|^2 P#(U) + 2 P(U,U) U
// state must carry the 3-jet (J = nabla_U A).
Vec e_vector(const GeometryJet& jet, const CurveState& state);

// L = <U, E> / |U|^2  (value of the third-order Lagrangian density).
double lagrangian_L(const GeometryJet& jet, const CurveState& state);

// First-order form: L1 = |A|^2 / (2|U|^2) - <U,A>^2 / |U|^4 + P(U,U).
// L = d/dt(<U,A>/|U|^2) + L1 along any curve.
double lagrangian_L1(const GeometryJet& jet, const CurveState& state);

// Right-hand side of the fourth-order system:
//   K^e = g^ec (W_abcd-part  -  2|U|^2 nabla_[c P_a]b U^a U^b)
// Needs JetLevel::Full.  <K, U> = 0 identically.
Vec k_vector(const GeometryJet& jet, const CurveState& state);

// D(V) = nabla_U V + (<A,V> U - <U,V> A - <A,U> V) / |U|^2.
// dv_cov = nabla_U V must be supplied by the caller.
Vec d_op(const GeometryJet& jet, const CurveState& state, const Vec& v, const Vec& dv_cov);

// Formal adjoint: D*(W) = -nabla_U W + (<U,W> A - <A,W> U - <A,U> W) / |U|^2.
Vec d_star(const GeometryJet& jet, const CurveState& state, const Vec& w, const Vec& dw_cov);

// F = (E - 2 L U) / |U|^2, the quantity whose D*-image drives the
// fourth-order system.
Vec mercator_f(const GeometryJet& jet, const CurveState& state);

// First integral of the flat fourth-order system (flat chart, constant
// metric diag(signature); signature defaults to Euclidean):
//   C = (J - |A|^2 U/|U|^2 - 2<A,U> A/|U|^2 + 4<A,U>^2 U/|U|^4
//        - 2<J,U> U/|U|^2) / |U|^2
Vec mercator_c(const CurveState& state);
Vec mercator_c(const CurveState& state, const Vec& signature);

// Coordinate-derivative right-hand sides for the integrators.
// cg3: third-order conformal geodesic system, state (x, U, A).
struct Cg3Deriv {
  Vec dx, du, da;
};
Cg3Deriv cg3_rhs(const GeometryJet& jet, const CurveState& state);

// Unit-speed third-order form: nabla_U A = -(|A|^2 + P(U,U)) U + P#(U).
// Preserves |U| = 1 and <U,A> = 0 exactly along the flow.
Cg3Deriv arclength_cg_rhs(const GeometryJet& jet, const CurveState& state);

// mercator4: fourth-order system, state (x, U, A, J).  The jerk update is
// obtained by chain-ruling F through finite-difference Jacobians and solving
// the (reflection) linear system for dJ.
struct Mercator4Deriv {
  Vec dx, du, da, dj;
};
Mercator4Deriv mercator4_rhs(const MetricSpec& spec, const GeometryJet& jet,
                             const CurveState& state, const FdOptions& fd = {});

// Flat-chart third-order reduction of the fourth-order system at constant C
// (cheaper and exactly conservative):
//   dA = -|A|^2 U/|U|^2 + 2<A,U> A/|U|^2 - 2<C,U> U + |U|^2 C
Cg3Deriv flat_cform_rhs(const CurveState& state, const Vec& c_vec);
Cg3Deriv flat_cform_rhs(const CurveState& state, const Vec& c_vec, const Vec& signature);

// Jerk consistent with constant C in the flat chart (used to build 3-jets
// from (x, U, A, C) initial data).
Vec flat_jerk_from_c(const CurveState& state, const Vec& c_vec);
Vec flat_jerk_from_c(const CurveState& state, const Vec& c_vec, const Vec& signature);

}  // namespace confgeo
