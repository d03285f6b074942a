#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "confgeo/dynamics.hpp"
#include "confgeo/oracles.hpp"
#include "confgeo/variational.hpp"
#include "test_helpers.hpp"

using namespace confgeo;
using testing::make_rng;
using testing::random_vec;

TEST_CASE("bump variation: support, smoothness, derivative consistency") {
  Vec dir(3);
  dir << 1.0, -2.0, 0.5;
  const VariationField f = bump_variation(0.0, 1.0, dir);
  CHECK(f.v(-0.1).norm() == 0.0);
  CHECK(f.v(0.0).norm() == 0.0);
  CHECK(f.v(1.1).norm() == 0.0);
  CHECK(f.v(0.5).norm() > 0.0);
  const double h = 1e-5;
  for (double t : {0.2, 0.5, 0.85}) {
    const Vec dv_fd = (f.v(t + h) - f.v(t - h)) / (2.0 * h);
    CHECK((f.dv(t) - dv_fd).norm() < 1e-8);
    const Vec d2v_fd = (f.dv(t + h) - f.dv(t - h)) / (2.0 * h);
    CHECK((f.d2v(t) - d2v_fd).norm() < 1e-6);  // b''' grows near the support edge
  }
  // Odd mode vanishes at the midpoint and is antisymmetric about it.
  const VariationField g = bump_variation(0.0, 1.0, dir, 1);
  CHECK(g.v(0.5).norm() < 1e-15);
  CHECK((g.v(0.3) + g.v(0.7)).norm() < 1e-15);
}

TEST_CASE("functional value: straight lines and circles have zero action") {
  const MetricSpec flat = MetricSpec::flat_euclidean(3);
  const CurveModel line = testing::cubic_model(Vec::Zero(3), Vec::Unit(3, 0),
                                               Vec::Zero(3), Vec::Zero(3));
  CHECK(std::abs(functional_I(flat, line, 0.0, 1.0)) < 1e-12);

  const oracles::CircleParams cp =
      oracles::make_circle(Vec::Zero(3), Vec::Unit(3, 0), 0.7 * Vec::Unit(3, 1));
  // L = 0 pointwise along the projectively parametrized circle.
  CHECK(std::abs(functional_I(flat, oracles::circle_model(cp), 0.0, 1.0)) < 1e-10);
}

TEST_CASE("D applied through the curve jet agrees with the direct operator") {
  const MetricSpec sphere = MetricSpec::round_sphere_stereographic(3);
  auto rng = make_rng(509);
  const CurveModel model = testing::random_cubic(rng, 3);
  const VariationField var = testing::smooth_variation(random_vec(rng, 3));
  for (double t : {0.2, 0.7}) {
    const DopJet dj = d_op_jet(sphere, model, var, t);
    const CurveState s = jet_at(sphere, model, t);
    const GeometryJet jet = geometry_jet(sphere, s.x, JetLevel::Curvature);
    const Vec dv_cov = var.dv(t) + jet.gamma_quad(s.u, var.v(t));
    CHECK((dj.dv_op - d_op(jet, s, var.v(t), dv_cov)).norm() < 1e-11);

    // Independent route to D^2 V: finite-difference D V along the curve and
    // push it through the direct operator once more.
    const double h = 1e-4;
    auto dv_at = [&](double tt) { return d_op_jet(sphere, model, var, tt).dv_op; };
    const Vec ddv_coord = (dv_at(t + h) - dv_at(t - h)) / (2.0 * h);
    const Vec ddv_cov = ddv_coord + jet.gamma_quad(s.u, dv_at(t));
    const Vec d2_direct = d_op(jet, s, dv_at(t), ddv_cov);
    CHECK((dj.d2v_op - d2_direct).norm() < 1e-6);
  }
}

TEST_CASE("first variation: formula matches finite differences (flat, interior bump)") {
  const MetricSpec flat = MetricSpec::flat_euclidean(3);
  auto rng = make_rng(521);
  const CurveModel model = testing::random_cubic(rng, 3);
  const VariationField var = bump_variation(0.0, 1.0, random_vec(rng, 3));
  const FirstVariation fv = first_variation_formula(flat, model, var, 0.0, 1.0);
  CHECK(std::abs(fv.boundary_term) < 1e-12);  // bump dies at the ends
  const double fd_value = first_variation_fd(flat, model, var, 0.0, 1.0);
  CHECK(fv.total() == doctest::Approx(fd_value).epsilon(2e-6));
}

TEST_CASE("first variation: boundary terms carry endpoint-moving variations") {
  const MetricSpec flat = MetricSpec::flat_euclidean(3);
  auto rng = make_rng(523);
  const CurveModel model = testing::random_cubic(rng, 3);
  const VariationField var = testing::smooth_variation(random_vec(rng, 3), 0.9, 0.3);
  const FirstVariation fv = first_variation_formula(flat, model, var, 0.0, 1.0);
  CHECK(std::abs(fv.boundary_term) > 1e-4);  // genuinely active
  CHECK(fv.boundary_term ==
        doctest::Approx(boundary_term(flat, model, var, 1.0) -
                        boundary_term(flat, model, var, 0.0)).epsilon(1e-12));
  const double fd_value = first_variation_fd(flat, model, var, 0.0, 1.0);
  CHECK(fv.total() == doctest::Approx(fd_value).epsilon(2e-5));
}

TEST_CASE("first variation on the sphere matches finite differences") {
  const MetricSpec sphere = MetricSpec::round_sphere_stereographic(3);
  auto rng = make_rng(541);
  const CurveModel model = testing::random_cubic(rng, 3);
  const VariationField var = bump_variation(0.0, 1.0, random_vec(rng, 3));
  const FirstVariation fv = first_variation_formula(sphere, model, var, 0.0, 1.0);
  const double fd_value = first_variation_fd(sphere, model, var, 0.0, 1.0);
  const double scale = std::max(std::abs(fd_value), 1e-3);
  CHECK(std::abs(fv.total() - fd_value) / scale < 1e-5);
}

TEST_CASE("circles are stationary; generic curves are not") {
  const MetricSpec flat = MetricSpec::flat_euclidean(3);
  const oracles::CircleParams cp =
      oracles::make_circle(Vec::Zero(3), Vec::Unit(3, 0), 0.5 * Vec::Unit(3, 1));
  const StationarityReport circle_rep =
      stationarity_check(flat, oracles::circle_model(cp), 0.0, 1.0, 1e-7);
  CHECK(circle_rep.stationary);

  auto rng = make_rng(547);
  const CurveModel generic = testing::random_cubic(rng, 3);
  const StationarityReport generic_rep = stationarity_check(flat, generic, 0.0, 1.0, 1e-7);
  CHECK_FALSE(generic_rep.stationary);
  CHECK(generic_rep.max_abs_variation > 1e-3);
}

TEST_CASE("shooting recovers circle initial data from endpoints") {
  const MetricSpec flat = MetricSpec::flat_euclidean(3);
  const oracles::CircleParams cp =
      oracles::make_circle(Vec::Zero(3), Vec::Unit(3, 0), 0.5 * Vec::Unit(3, 1));
  const CurveModel model = oracles::circle_model(cp);
  BvpProblem problem;
  problem.metric = flat;
  problem.t0 = 0.0;
  problem.t1 = 1.0;
  problem.x0 = model.x(0.0);
  problem.u0 = model.dx(0.0);
  problem.x1 = model.x(1.0);
  problem.u1 = model.dx(1.0);
  const BvpResult res = bvp_shoot(problem);
  // Truth: A0 = 2 a0 = e2, J0 = -6 |a0|^2 u0 = -1.5 e1.
  CHECK((res.a0 - Vec::Unit(3, 1)).norm() < 1e-6);
  CHECK((res.j0 + 1.5 * Vec::Unit(3, 0)).norm() < 1e-5);
  CHECK(res.iterations <= 20);
  CHECK(res.residual < 1e-8);
  CHECK_FALSE(res.trace.empty());
}

TEST_CASE("perturbations exiting the chart raise PatchExit") {
  // Factor x0 vanishes on a hyperplane near the curve; a large transverse
  // variation must push some node across it.
  const MetricSpec spec =
      MetricSpec::conformally_flat(3, ConformalFactor::from_expression("x0+0.05"));
  const CurveModel line = testing::cubic_model(0.1 * Vec::Unit(3, 0), Vec::Unit(3, 1),
                                               Vec::Zero(3), Vec::Zero(3));
  Vec dir = -40.0 * Vec::Unit(3, 0);
  const VariationField var = bump_variation(0.0, 1.0, dir);
  FdVariationOptions opts;
  opts.s = 0.02;
  CHECK_THROWS_AS(first_variation_fd(spec, line, var, 0.0, 1.0, opts), PatchExit);
}

TEST_CASE("perturbed functional: L1 + boundary split equals the direct action") {
  const MetricSpec specs[] = {MetricSpec::flat_euclidean(3),
                              MetricSpec::round_sphere_stereographic(3)};
  auto rng = make_rng(947);
  for (const MetricSpec& spec : specs) {
    const CurveModel base = testing::random_cubic(rng, 3);
    const CurveModel shift = testing::random_cubic(rng, 3);
    VariationField var;
    var.v = shift.x;
    var.dv = shift.dx;
    var.d2v = shift.d2x;
    // s = 0: the two evaluation orders of the same functional must agree.
    CHECK(perturbed_functional(spec, base, var, 0.0, 0.0, 1.0) ==
          doctest::Approx(functional_I(spec, base, 0.0, 1.0)).epsilon(1e-9));
    // s != 0: a polynomial perturbation of a polynomial is again polynomial,
    // so the plain route can evaluate the perturbed curve exactly.
    const double s = 0.17;
    CurveModel moved;
    moved.x = [&, s](double t) { return Vec(base.x(t) + s * shift.x(t)); };
    moved.dx = [&, s](double t) { return Vec(base.dx(t) + s * shift.dx(t)); };
    moved.d2x = [&, s](double t) { return Vec(base.d2x(t) + s * shift.d2x(t)); };
    moved.d3x = [&, s](double t) { return Vec(base.d3x(t) + s * shift.d3x(t)); };
    CHECK(perturbed_functional(spec, base, var, s, 0.0, 1.0) ==
          doctest::Approx(functional_I(spec, moved, 0.0, 1.0)).epsilon(1e-9));
  }
}
