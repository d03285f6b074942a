#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "confgeo/errors.hpp"
#include "confgeo/integrate.hpp"

using namespace confgeo;

namespace {

// Harmonic oscillator y = (q, p), q' = p, p' = -q.
Vec osc_rhs(double, const Vec& y) {
  Vec d(2);
  d << y(1), -y(0);
  return d;
}

}  // namespace

TEST_CASE("uniform grid helper") {
  const std::vector<double> ts = uniform_times(0.0, 1.0, 4);
  REQUIRE(ts.size() == 5);
  CHECK(ts[0] == 0.0);
  CHECK(ts[2] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ts[4] == 1.0);
  CHECK_THROWS_AS(uniform_times(0.0, 1.0, 0), BadParams);
}

TEST_CASE("rkf45 integrates the oscillator to the requested tolerance") {
  Vec y0(2);
  y0 << 1.0, 0.0;
  IntegratorOptions opts;
  opts.abs_tol = 1e-12;
  opts.rel_tol = 1e-12;
  StepStats stats;
  const std::vector<double> ts{0.0, 1.0, 2.0, 6.0};
  const std::vector<Vec> ys = integrate_dense(osc_rhs, y0, ts, opts, &stats);
  REQUIRE(ys.size() == 4);
  for (size_t i = 0; i < ts.size(); ++i) {
    CHECK(std::abs(ys[i](0) - std::cos(ts[i])) < 1e-9);
    CHECK(std::abs(ys[i](1) + std::sin(ts[i])) < 1e-9);
  }
  CHECK(stats.accepted > 0);
}

TEST_CASE("rk4 fixed-step path matches the analytic solution") {
  Vec y0(1);
  y0 << 1.0;
  IntegratorOptions opts;
  opts.method = Method::Rk4;
  opts.rk4_substeps = 128;
  auto decay = [](double, const Vec& y) { return Vec(-y); };
  const std::vector<Vec> ys = integrate_dense(decay, y0, {0.0, 1.0}, opts);
  CHECK(std::abs(ys[1](0) - std::exp(-1.0)) < 2e-11);
}

TEST_CASE("rk4 error falls 16x when the step halves") {
  Vec y0(2);
  y0 << 1.0, 0.0;
  auto err_with = [&](int substeps) {
    IntegratorOptions opts;
    opts.method = Method::Rk4;
    opts.rk4_substeps = substeps;
    const std::vector<Vec> ys = integrate_dense(osc_rhs, y0, {0.0, 2.0}, opts);
    Vec exact(2);
    exact << std::cos(2.0), -std::sin(2.0);
    return (ys[1] - exact).norm();
  };
  const double e1 = err_with(20);
  const double e2 = err_with(40);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
}

TEST_CASE("invalid sample grids are rejected") {
  Vec y0(1);
  y0 << 1.0;
  auto f = [](double, const Vec& y) { return y; };
  CHECK_THROWS_AS(integrate_dense(f, y0, {}, {}), BadParams);
  CHECK_THROWS_AS(integrate_dense(f, y0, {0.0, 1.0, 0.5}, {}), BadParams);
}

TEST_CASE("method names round-trip") {
  CHECK(method_name(Method::Rkf45) == std::string("rkf45"));
  CHECK(method_name(Method::Rk4) == std::string("rk4"));
  CHECK(method_from_name("rkf45") == Method::Rkf45);
  CHECK(method_from_name("rk4") == Method::Rk4);
  CHECK_THROWS_AS(method_from_name("euler"), ConfigError);
}

TEST_CASE("stiff blow-up exhausts the step budget with a diagnostic") {
  // y' = y^2 from y(0)=1 blows up at t=1; asking for y(2) cannot converge.
  Vec y0(1);
  y0 << 1.0;
  IntegratorOptions opts;
  opts.max_steps = 2000;
  auto f = [](double, const Vec& y) { return Vec(y.array().square()); };
  CHECK_THROWS_AS(integrate_dense(f, y0, {0.0, 2.0}, opts), NumericalError);
}
