#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "confgeo/dynamics.hpp"
#include "confgeo/fd.hpp"
#include "confgeo/oracles.hpp"
#include "test_helpers.hpp"

using namespace confgeo;
using namespace confgeo::oracles;
using testing::make_rng;
using testing::random_vec;

namespace {

Vec e_k(int n, int k) {
  Vec v = Vec::Zero(n);
  v(k) = 1.0;
  return v;
}

// Central 6th-order FD of a model coordinate function, independent route for
// checking analytic derivatives.
Vec fd_deriv(const std::function<Vec(double)>& f, double t, double h) {
  return (45.0 * (f(t + h) - f(t - h)) - 9.0 * (f(t + 2 * h) - f(t - 2 * h)) +
          (f(t + 3 * h) - f(t - 3 * h))) /
         (60.0 * h);
}

}  // namespace

TEST_CASE("circle family: frozen values at the canonical data") {
  const CircleParams cp = make_circle(Vec::Zero(3), e_k(3, 0), e_k(3, 1));
  // X(1) = (U0 + A0) / (1 + |A0|^2) = (1/2, 1/2, 0).
  const Vec x1 = circle_point(cp, 1.0);
  CHECK(x1(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(x1(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(x1(2) == 0.0);

  // 2-jet at t=0 is (X0, U0, 2 A0); third derivative is -6 |A0|^2 U0.
  const CurveModel m = circle_model(cp);
  CHECK((m.x(0.0) - cp.x0).norm() == 0.0);
  CHECK((m.dx(0.0) - cp.u0).norm() < 1e-15);
  CHECK((m.d2x(0.0) - 2.0 * cp.a0).norm() < 1e-15);
  CHECK((m.d3x(0.0) + 6.0 * cp.a0.squaredNorm() * cp.u0).norm() < 1e-14);

  // Geometry: center X0 + A0/(2|A0|^2), radius 1/(2|A0|).
  const Vec center = circle_center(cp);
  CHECK((center - 0.5 * e_k(3, 1)).norm() < 1e-15);
  for (double t : {0.0, 0.7, 2.0, -3.0})
    CHECK((circle_point(cp, t) - center).norm() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("circle family: analytic derivatives agree with finite differences") {
  auto rng = make_rng(211);
  Vec u0 = testing::random_unit(rng, 3);
  Vec a0 = random_vec(rng, 3);
  a0 -= a0.dot(u0) * u0;
  const CurveModel m = circle_model(make_circle(random_vec(rng, 3), u0, a0));
  for (double t : {0.2, 1.1}) {
    CHECK((m.dx(t) - fd_deriv(m.x, t, 1e-2)).norm() < 1e-9);
    CHECK((m.d2x(t) - fd_deriv(m.dx, t, 1e-2)).norm() < 1e-9);
    CHECK((m.d3x(t) - fd_deriv(m.d2x, t, 1e-2)).norm() < 1e-8);
  }
}

TEST_CASE("circle data validation") {
  CHECK_THROWS_AS(make_circle(Vec::Zero(3), 2.0 * e_k(3, 0), e_k(3, 1)), BadParams);
  CHECK_THROWS_AS(make_circle(Vec::Zero(3), e_k(3, 0), e_k(3, 0)), BadParams);
}

TEST_CASE("logarithmic spiral: polar law and derivatives") {
  SpiralParams sp;
  sp.p0 = e_k(3, 0);
  sp.q0 = e_k(3, 1);
  sp.r0 = Vec::Zero(3);
  sp.c = 10.0;
  const CurveModel m = spiral_model(sp);

  // r = |P0| e^{theta/c} with theta = c t for the canonical parametrization.
  for (double t : {0.0, 0.3, 1.0}) {
    const Vec x = m.x(t);
    const double r = std::hypot(x(0), x(1));
    CHECK(r == doctest::Approx(std::exp(t)).epsilon(1e-12));
    // Unwind theta from the parametrization directly.
    CHECK(x(0) == doctest::Approx(r * std::cos(sp.c * t)).epsilon(1e-12));
    CHECK(x(1) == doctest::Approx(r * std::sin(sp.c * t)).epsilon(1e-12));
  }
  for (double t : {0.1, 0.8}) {
    CHECK((m.dx(t) - fd_deriv(m.x, t, 1e-3)).norm() < 1e-8);
    CHECK((m.d2x(t) - fd_deriv(m.dx, t, 1e-3)).norm() < 1e-7);
    CHECK((m.d3x(t) - fd_deriv(m.d2x, t, 1e-3)).norm() < 1e-6);
  }
}

TEST_CASE("spiral through a 2-jet reproduces the jet and the curve") {
  auto rng = make_rng(223);
  // Generic data with <U,A> != 0 and enough normal acceleration.
  const Vec x0 = random_vec(rng, 3, -0.3, 0.3);
  const Vec u0 = testing::random_unit(rng, 3);
  Vec a0 = random_vec(rng, 3);
  a0 += 0.2 * u0;  // ensure alpha != 0
  const SpiralParams sp = spiral_through(x0, u0, a0);
  const CurveModel m = spiral_model(sp);
  CHECK((m.x(0.0) - x0).norm() < 1e-12);
  CHECK((m.dx(0.0) - u0).norm() < 1e-11);
  CHECK((m.d2x(0.0) - a0).norm() < 1e-11);
  // Plane frame invariants of the construction.
  CHECK(std::abs(sp.p0.dot(sp.q0)) < 1e-12);
  CHECK(sp.p0.norm() == doctest::Approx(sp.q0.norm()).epsilon(1e-12));

  // A spiral's own 2-jet at t != 0 regenerates the same curve.
  const double t0 = 0.4;
  const SpiralParams sp2 = spiral_through(m.x(t0), m.dx(t0), m.d2x(t0));
  const CurveModel m2 = spiral_model(sp2);
  for (double s : {0.0, 0.5, 1.0}) CHECK((m2.x(s) - m.x(t0 + s)).norm() < 1e-9);
}

TEST_CASE("spiral validation rejects degenerate jets") {
  CHECK_THROWS_AS(spiral_through(Vec::Zero(3), Vec::Zero(3), e_k(3, 1)), NullVelocity);
  // <U,A> = 0 is a circle, not a spiral.
  CHECK_THROWS_AS(spiral_through(Vec::Zero(3), e_k(3, 0), e_k(3, 1)), BadParams);
  // A parallel to U gives omega^2 <= 0.
  CHECK_THROWS_AS(spiral_through(Vec::Zero(3), e_k(3, 0), 0.5 * e_k(3, 0)), BadParams);
}

TEST_CASE("first integral: constant along circles, consistent with the flat flow") {
  const MetricSpec spec = MetricSpec::flat_euclidean(3);
  const CircleParams cp = make_circle(Vec::Zero(3), e_k(3, 0), e_k(3, 1));
  const CurveModel m = circle_model(cp);
  // At t = 0 the state is (e1, 2 e2) so C = 2 |A0|^2 U0 = 2 e1.
  for (double t : {0.0, 0.4, 1.3, 2.5}) {
    const Vec c = first_integral_c(m.dx(t), m.d2x(t));
    CHECK((c - 2.0 * e_k(3, 0)).norm() < 1e-10);
    // Cross-route: the 3-jet form evaluated on the model gives the same C.
    const CurveState s = jet_at(spec, m, t);
    CHECK((mercator_c(s) - c).norm() < 1e-9);
  }
}

TEST_CASE("jerk from the 2-jet first integral closes the third-order flow") {
  // Setting J from C = first_integral_c(U, A) must reproduce the flat
  // third-order equation's jerk at arbitrary states.
  auto rng = make_rng(239);
  const MetricSpec spec = MetricSpec::flat_euclidean(3);
  const GeometryJet jet = geometry_jet(spec, Vec::Zero(3), JetLevel::Curvature);
  for (int trial = 0; trial < 5; ++trial) {
    CurveState s;
    s.x = random_vec(rng, 3);
    s.u = testing::random_unit(rng, 3) * (0.5 + trial * 0.3);
    s.a = random_vec(rng, 3);
    const Vec c = first_integral_c(s.u, s.a);
    const Vec j_from_c = flat_jerk_from_c(s, c);
    const Cg3Deriv d = cg3_rhs(jet, s);
    CHECK((j_from_c - d.da).norm() < 1e-12 * std::max(1.0, d.da.norm()));
  }
}

TEST_CASE("arclength reduction of the spiral: constant coefficient c^2 - 1") {
  SpiralParams sp;
  sp.p0 = e_k(3, 0);
  sp.q0 = e_k(3, 1);
  sp.r0 = Vec::Zero(3);
  sp.c = 10.0;
  const CurveModel m = spiral_model(sp);
  const std::vector<double> ts = uniform_times(0.0, 1.0, 200);
  const ArcReductionReport rep = arc_reduction_residual(m, Vec::Zero(3), ts);
  CHECK(rep.m_mean == doctest::Approx(99.0).epsilon(1e-9));  // c^2 - 1
  CHECK(rep.m_spread < 1e-8);
  CHECK(rep.ode_residual < 1e-8);
  CHECK(rep.dot_residual < 1e-8);

  // Circles reduce with m = constant as well (here <C,u> = 0 identically).
  const CircleParams cp = make_circle(Vec::Zero(3), e_k(3, 0), 0.5 * e_k(3, 1));
  const ArcReductionReport repc =
      arc_reduction_residual(circle_model(cp), 2.0 * 0.25 * e_k(3, 0), ts);
  CHECK(repc.ode_residual < 1e-7);
  CHECK(repc.m_spread < 1e-7);
}

TEST_CASE("special conformal map: involution, pole, and derivative chain") {
  auto rng = make_rng(251);
  const Vec b = 0.1 * random_vec(rng, 3);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec x = random_vec(rng, 3);
    const Vec y = special_conformal(x, b);
    CHECK((special_conformal_inverse(y, b) - x).norm() < 1e-12);
  }
  // Denominator zero: B = e1, X = e1 gives 1 - 2 + 1 = 0.
  CHECK_THROWS_AS(special_conformal(e_k(3, 0), e_k(3, 0)), PoleHit);

  const CurveModel base = testing::random_cubic(rng, 3);
  const CurveModel mapped = special_conformal_model(base, b);
  for (double t : {0.15, 0.6}) {
    CHECK((mapped.x(t) - special_conformal(base.x(t), b)).norm() < 1e-13);
    CHECK((mapped.dx(t) - fd_deriv(mapped.x, t, 1e-2)).norm() < 1e-9);
    CHECK((mapped.d2x(t) - fd_deriv(mapped.dx, t, 1e-2)).norm() < 1e-8);
    CHECK((mapped.d3x(t) - fd_deriv(mapped.d2x, t, 1e-2)).norm() < 1e-7);
  }
}

TEST_CASE("sphere lift: unit norm, tangency, roundtrip, chart tangent") {
  auto rng = make_rng(263);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec x = random_vec(rng, 3, -2.0, 2.0);
    const Vec p = sphere_lift(x);
    REQUIRE(p.size() == 4);
    CHECK(std::abs(p.norm() - 1.0) < 1e-13);
    CHECK((stereographic(p) - x).norm() < 1e-12);

    const Vec v = random_vec(rng, 3);
    const Vec dp = sphere_lift_tangent(x, v);
    CHECK(std::abs(dp.dot(p)) < 1e-12);  // tangent to the sphere
    // Independent route: finite difference through the lift.
    const double h = 1e-6;
    const Vec dp_fd = (sphere_lift(x + h * v) - sphere_lift(x - h * v)) / (2.0 * h);
    CHECK((dp - dp_fd).norm() < 1e-8);
  }
  // North pole is outside the chart.
  Vec north(4);
  north << 0, 0, 0, 1;
  CHECK_THROWS_AS(stereographic(north), PoleHit);
}

TEST_CASE("meridian angle: zero on radial rays, constant arctan(c) on spirals") {
  // Radial rays in the chart lift to meridians.
  Vec x(3);
  x << 0.4, -0.2, 0.7;
  CHECK(std::abs(meridian_angle(x, x)) < 1e-9);

  SpiralParams sp;
  sp.p0 = e_k(3, 0);
  sp.q0 = e_k(3, 1);
  sp.r0 = Vec::Zero(3);
  sp.c = 3.0;
  const CurveModel m = spiral_model(sp);
  std::vector<double> angles;
  for (double t = 0.0; t <= 1.0; t += 0.05) angles.push_back(meridian_angle(m.x(t), m.dx(t)));
  double mean = 0.0;
  for (double a : angles) mean += a;
  mean /= static_cast<double>(angles.size());
  double sd = 0.0;
  for (double a : angles) sd += (a - mean) * (a - mean);
  sd = std::sqrt(sd / static_cast<double>(angles.size()));
  CHECK(sd < 1e-9);
  // The chart is conformal, so the spiral's pitch angle arctan(c) survives.
  CHECK(std::abs(std::cos(mean)) == doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(1e-9));
}
