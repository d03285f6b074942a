#pragma once

#include <vector>

#include "confgeo/trajectory.hpp"
#include "confgeo/types.hpp"

// Closed-form solution families in the flat chart, used as ground truth for
// the integrators, plus the exact conformal maps relating them.
namespace confgeo::oracles {

// Projectively parametrised circle through (x0, u0) with |u0| = 1 and
// <u0, a0> = 0:  X(t) = x0 + (t u0 + t^2 a0) / (1 + t^2 |a0|^2).
// Note the 2-jet at t = 0 is (x0, u0, 2 a0), not (x0, u0, a0).
struct CircleParams {
  Vec x0, u0, a0;
};
CircleParams make_circle(Vec x0, Vec u0, Vec a0);  // validates the invariants
Vec circle_point(const CircleParams& p, double t);
CurveModel circle_model(const CircleParams& p);
Vec circle_center(const CircleParams& p);  // geometric center, radius 1/(2|a0|)

// Logarithmic spiral  X(t) = e^{rt} cos(c r t) p0 + e^{rt} sin(c r t) q0 + r0
// with <p0, q0> = 0, |p0| = |q0|, c != 0.  The canonical family has rate
// r = 1; the rate only reparametrises time affinely.
struct SpiralParams {
  Vec p0, q0, r0;
  double c = 0.0;
  double rate = 1.0;
};
SpiralParams make_spiral(Vec p0, Vec q0, Vec r0, double c, double rate = 1.0);
Vec spiral_point(const SpiralParams& p, double t);
CurveModel spiral_model(const SpiralParams& p);

// Spiral through the 2-jet (x0, u0, a0), valid when <u0,a0> != 0 and
// |a0|^2 |u0|^2 > <u0,a0>^2 (otherwise the data is circular/degenerate).
SpiralParams spiral_through(const Vec& x0, const Vec& u0, const Vec& a0);

// Special conformal transformation
//   Y = (X - |X|^2 B) / (1 - 2<X,B> + |B|^2 |X|^2);
// the inverse is the same map with -B.
Vec special_conformal(const Vec& x, const Vec& b);
Vec special_conformal_inverse(const Vec& y, const Vec& b);
// Pushforward of a model curve, derivatives by the exact quotient rule.
CurveModel special_conformal_model(const CurveModel& model, const Vec& b);

// Round sphere S^n in R^{n+1}: lift of the stereographic chart (inverse
// stereographic projection from the north pole e_{n+1}) and its differential.
Vec sphere_lift(const Vec& x);
Vec sphere_lift_tangent(const Vec& x, const Vec& v);
// Stereographic projection S^n -> chart; PoleHit near the north pole.
Vec stereographic(const Vec& p);

// Angle (radians, in [0, pi]) between a chart curve direction v at x and the
// north-pointing meridian direction through the lifted point.
double meridian_angle(const Vec& x, const Vec& v);

// First integral of the flat fourth-order flow, evaluated from the 2-jet:
//   C = (|A|^2 / (2|U|^4) - 2<A,U>^2 / |U|^6) U + (<A,U> / |U|^4) A.
Vec first_integral_c(const Vec& u, const Vec& a);

// Arc-length reduction residual for a model curve with constant vector C:
// with hdot = |Xdot|, u = Xdot/hdot, H = hddot/hdot, the curve must satisfy
//   uddot + (H^2 - 3 Hdot + m) u - hdot C = 0,  <C, u> = -Hdot/hdot
// for some constant m.  Returns the worst residuals and the recovered m.
struct ArcReductionReport {
  double ode_residual = 0.0;   // max |uddot + (H^2 - 3 Hdot + m_mean) u - hdot C|
  double dot_residual = 0.0;   // max |<C,u> + Hdot/hdot|
  double m_mean = 0.0;
  double m_spread = 0.0;       // max |m(t) - m_mean|
};
ArcReductionReport arc_reduction_residual(const CurveModel& model, const Vec& c_vec,
                                          const std::vector<double>& ts);

}  // namespace confgeo::oracles
