#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "confgeo/geometry.hpp"
#include "test_helpers.hpp"

using namespace confgeo;
using testing::curved4;
using testing::make_rng;
using testing::random_vec;

namespace {

double max_abs4(const Tensor4& t, int n) {
  double m = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) m = std::max(m, std::abs(t(a, b, c, d)));
  return m;
}

}  // namespace

TEST_CASE("flat metric has vanishing connection and curvature") {
  const MetricSpec spec = MetricSpec::flat_euclidean(3);
  auto rng = make_rng(11);
  const GeometryJet jet = geometry_jet(spec, random_vec(rng, 3), JetLevel::Full);
  CHECK((jet.g - Mat::Identity(3, 3)).norm() == 0.0);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) CHECK(jet.gamma(a, b, c) == 0.0);
  CHECK(max_abs4(jet.riemann, 3) == 0.0);
  CHECK(jet.scalar == 0.0);
  CHECK(jet.schouten.norm() == 0.0);
}

TEST_CASE("round sphere: scalar curvature n(n-1) and Schouten g/2") {
  auto rng = make_rng(23);
  for (int n : {3, 4}) {
    const MetricSpec spec = MetricSpec::round_sphere_stereographic(n);
    for (int trial = 0; trial < 3; ++trial) {
      const Vec x = random_vec(rng, n, -0.8, 0.8);
      const GeometryJet jet = geometry_jet(spec, x, JetLevel::Curvature);
      CHECK(jet.scalar == doctest::Approx(double(n) * (n - 1)).epsilon(1e-7));
      CHECK((jet.schouten - 0.5 * jet.g).norm() < 1e-7 * jet.g.norm());
      // Constant-curvature space: Weyl vanishes.
      CHECK(max_abs4(jet.weyl_low, n) < 1e-6);
    }
  }
}

TEST_CASE("exponential factor: Schouten has the closed form k k^T - |k|^2/2 I") {
  // For g^ = e^{2<k,x>} delta the flat transformation law collapses to
  // P^ = k (x) k - 1/2 |k|^2 I, constant in x, with scalar
  // S^ = -(n-1)(n-2) |k|^2 e^{-2<k,x>}.
  const int n = 3;
  Vec k(n);
  k << 0.3, -0.2, 0.5;
  const MetricSpec spec = MetricSpec::conformally_flat(n, ConformalFactor::exponential(k));
  auto rng = make_rng(31);
  for (int trial = 0; trial < 3; ++trial) {
    const Vec x = random_vec(rng, n, -0.5, 0.5);
    const GeometryJet jet = geometry_jet(spec, x, JetLevel::Curvature);
    const Mat expected = k * k.transpose() - 0.5 * k.squaredNorm() * Mat::Identity(n, n);
    CHECK((jet.schouten - expected).norm() < 1e-7);
    const double omega2 = std::exp(2.0 * k.dot(x));
    CHECK(jet.scalar ==
          doctest::Approx(-(n - 1.0) * (n - 2.0) * k.squaredNorm() / omega2).epsilon(1e-6));
  }
}

TEST_CASE("curved metric: Riemann symmetries, Bianchi, Ricci symmetry, Weyl traces") {
  const MetricSpec spec = curved4();
  auto rng = make_rng(47);
  const Vec x = random_vec(rng, 4, -0.5, 0.5);
  const GeometryJet jet = geometry_jet(spec, x, JetLevel::Curvature);
  const int n = 4;
  CHECK((jet.g * jet.g_inv - Mat::Identity(n, n)).norm() < 1e-12);

  const double scale = std::max(1.0, max_abs4(jet.riemann_low, n));
  double anti_cd = 0.0, anti_ab = 0.0, pair_sym = 0.0, bianchi = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          anti_cd = std::max(anti_cd, std::abs(jet.riemann_low(a, b, c, d) +
                                               jet.riemann_low(a, b, d, c)));
          anti_ab = std::max(anti_ab, std::abs(jet.riemann_low(a, b, c, d) +
                                               jet.riemann_low(b, a, c, d)));
          pair_sym = std::max(pair_sym, std::abs(jet.riemann_low(a, b, c, d) -
                                                 jet.riemann_low(c, d, a, b)));
          bianchi = std::max(bianchi, std::abs(jet.riemann_low(a, b, c, d) +
                                               jet.riemann_low(a, c, d, b) +
                                               jet.riemann_low(a, d, b, c)));
        }
  // dGamma comes from finite differences; identities hold to the FD accuracy.
  CHECK(anti_cd / scale < 1e-9);
  CHECK(anti_ab / scale < 1e-7);
  CHECK(pair_sym / scale < 1e-7);
  CHECK(bianchi / scale < 1e-7);
  CHECK((jet.ricci - jet.ricci.transpose()).norm() < 1e-8);

  // Weyl is trace-free in every index pair; check the a-c trace.
  double tracemax = 0.0;
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      double tr = 0.0;
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) tr += jet.g_inv(a, c) * jet.weyl_low(a, b, c, d);
      tracemax = std::max(tracemax, std::abs(tr));
    }
  CHECK(tracemax < 1e-7);
  // Generic curved metric: Weyl should NOT vanish.
  CHECK(max_abs4(jet.weyl_low, n) > 1e-3);
}

TEST_CASE("Christoffel symmetry and metric compatibility on the sphere") {
  const MetricSpec spec = MetricSpec::round_sphere_stereographic(3);
  auto rng = make_rng(59);
  const Vec x = random_vec(rng, 3, -0.7, 0.7);
  const GeometryJet jet = geometry_jet(spec, x, JetLevel::Connection);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        CHECK(jet.gamma(a, b, c) == doctest::Approx(jet.gamma(a, c, b)).epsilon(1e-12));

  // nabla_c g_ab = d_c g_ab - Gamma^e_ca g_eb - Gamma^e_cb g_ae = 0.
  const Tensor3 dg = spec.dg(x);
  double worst = 0.0;
  for (int c = 0; c < 3; ++c)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double v = dg(c, a, b);
        for (int e = 0; e < 3; ++e)
          v -= jet.gamma(e, c, a) * jet.g(e, b) + jet.gamma(e, c, b) * jet.g(a, e);
        worst = std::max(worst, std::abs(v));
      }
  CHECK(worst < 1e-9);
}

TEST_CASE("conformal rescaling: transformation law agrees with direct recomputation") {
  auto rng = make_rng(71);
  const MetricSpec base = MetricSpec::flat_euclidean(3);
  const ConformalFactor omega = ConformalFactor::sphere();
  const MetricSpec rescaled = rescale(base, omega);
  for (int trial = 0; trial < 4; ++trial) {
    const Vec x = random_vec(rng, 3, -0.6, 0.6);
    const GeometryJet jet = geometry_jet(base, x, JetLevel::Curvature);
    const Mat via_law = rescaled_schouten(jet, omega);
    const GeometryJet jet2 = geometry_jet(rescaled, x, JetLevel::Curvature);
    CHECK((via_law - jet2.schouten).norm() < 1e-7);
    // The sphere factor over flat space gives the round metric: P^ = g^/2.
    CHECK((via_law - 0.5 * jet2.g).norm() < 1e-7);
  }

  // Same consistency over a genuinely curved base.
  const MetricSpec cbase = curved4();
  Vec k(4);
  k << 0.2, -0.1, 0.15, 0.05;
  const ConformalFactor expf = ConformalFactor::exponential(k);
  const MetricSpec crescaled = rescale(cbase, expf);
  const Vec x = random_vec(rng, 4, -0.4, 0.4);
  const GeometryJet jc = geometry_jet(cbase, x, JetLevel::Curvature);
  const GeometryJet jc2 = geometry_jet(crescaled, x, JetLevel::Curvature);
  CHECK((rescaled_schouten(jc, expf) - jc2.schouten).norm() < 1e-5);
}

TEST_CASE("rescaled acceleration matches the curve recomputed in the new scale") {
  auto rng = make_rng(83);
  const MetricSpec base = MetricSpec::flat_euclidean(3);
  const ConformalFactor omega = ConformalFactor::sphere();
  const MetricSpec rescaled = rescale(base, omega);
  const CurveModel model = testing::random_cubic(rng, 3);
  for (double t : {0.1, 0.45}) {
    const CurveState sg = jet_at(base, model, t);
    const CurveState sh = jet_at(rescaled, model, t);
    const GeometryJet jet = geometry_jet(base, model.x(t), JetLevel::Curvature);
    CHECK((rescaled_acceleration(jet, sg, omega) - sh.a).norm() < 1e-8);
  }
}

TEST_CASE("finite-difference curvature converges at second order") {
  // Sphere metric fed through the `general` interface: partials come from
  // finite differences.  Against the analytic Schouten g/2 the error must
  // shrink by ~4x when h halves.
  const int n = 3;
  const ConformalFactor omega = ConformalFactor::sphere();
  auto comp = [omega, n](const Vec& x) {
    const double w = omega(x);
    return Mat(w * w * Mat::Identity(n, n));
  };
  const MetricSpec numeric = MetricSpec::general(n, comp, "sphere-numeric");
  Vec x(3);
  x << 0.3, -0.2, 0.4;
  const Mat g = comp(x);

  auto schouten_err = [&](double h) {
    FdOptions fd;
    fd.h = h;
    const GeometryJet jet = geometry_jet(numeric, x, JetLevel::Curvature, fd);
    return (jet.schouten - 0.5 * g).norm();
  };
  const double e1 = schouten_err(2e-3);
  const double e2 = schouten_err(1e-3);
  CHECK(e1 / e2 > 3.0);
  CHECK(e1 / e2 < 5.0);
}

TEST_CASE("upsilon of the sphere factor matches its closed form") {
  const ConformalFactor omega = ConformalFactor::sphere();
  Vec x(3);
  x << 0.5, -0.1, 0.2;
  const Vec u = omega.upsilon(x);
  const Vec expected = -2.0 * x / (1.0 + x.squaredNorm());
  CHECK((u - expected).norm() < 1e-9);
}

TEST_CASE("degenerate inputs are rejected") {
  CHECK_THROWS_AS(MetricSpec::round_sphere_stereographic(1), BadParams);
  const MetricSpec spec = MetricSpec::flat_euclidean(3);
  const GeometryJet jet = geometry_jet(spec, Vec::Zero(3), JetLevel::Connection);
  CHECK_THROWS_AS(checked_norm2(jet, Vec::Zero(3)), NullVelocity);
  // The factor must not vanish on the evaluation domain.
  const ConformalFactor bad = ConformalFactor::from_expression("x0");
  const MetricSpec badspec = MetricSpec::conformally_flat(3, bad);
  CHECK_THROWS_AS(geometry_jet(badspec, Vec::Zero(3), JetLevel::Connection), ZeroFactor);
}
