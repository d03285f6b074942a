#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "confgeo/errors.hpp"
#include "confgeo/fd.hpp"

using confgeo::Vec;
namespace fd = confgeo::fd;

TEST_CASE("stencil weights reproduce the classic central formulas") {
  // First derivative, 3-point uniform stencil: (-1/2, 0, 1/2) / h.
  Vec w = fd::stencil_weights(0.0, {-1.0, 0.0, 1.0}, 1);
  CHECK(w(0) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(w(1) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(w(2) == doctest::Approx(0.5).epsilon(1e-14));

  // Second derivative, 3-point: (1, -2, 1) / h^2.
  w = fd::stencil_weights(0.0, {-1.0, 0.0, 1.0}, 2);
  CHECK(w(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(w(1) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(w(2) == doctest::Approx(1.0).epsilon(1e-14));

  // First derivative, 5-point: (1/12, -2/3, 0, 2/3, -1/12).
  w = fd::stencil_weights(0.0, {-2.0, -1.0, 0.0, 1.0, 2.0}, 1);
  CHECK(w(0) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
  CHECK(w(1) == doctest::Approx(-2.0 / 3.0).epsilon(1e-13));
  CHECK(w(3) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(w(4) == doctest::Approx(-1.0 / 12.0).epsilon(1e-13));
}

TEST_CASE("stencil weights are exact on polynomials at off-center nodes") {
  // d/dx x^3 at x0 = 0.3 from nodes {0, 0.25, 0.5, 1.0}: cubic stencil is exact.
  const std::vector<double> xs{0.0, 0.25, 0.5, 1.0};
  const Vec w = fd::stencil_weights(0.3, xs, 1);
  double d = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) d += w(static_cast<int>(i)) * xs[i] * xs[i] * xs[i];
  CHECK(d == doctest::Approx(3.0 * 0.3 * 0.3).epsilon(1e-12));
}

TEST_CASE("directional differences hit quadratics exactly and sin to O(h^4)") {
  auto f = [](const Vec& x) { return x(0) * x(0) + 3.0 * x(0) * x(1); };
  Vec x(2);
  x << 0.7, -0.2;
  const double d0 = fd::directional_diff(f, x, 0, 1e-3, 2);
  CHECK(d0 == doctest::Approx(2.0 * 0.7 + 3.0 * -0.2).epsilon(1e-10));

  auto g = [](const Vec& x) { return std::sin(x(0)); };
  Vec y(1);
  y << 0.5;
  const double d4 = fd::directional_diff(g, y, 0, 1e-2, 4);
  CHECK(std::abs(d4 - std::cos(0.5)) < 1e-9);
}

TEST_CASE("gradient and jacobian agree with analytic derivatives") {
  auto f = [](const Vec& x) { return std::exp(x(0)) * std::sin(x(1)); };
  Vec x(2);
  x << 0.3, 1.1;
  const Vec g = fd::gradient(f, x, 1e-5, 2);
  CHECK(g(0) == doctest::Approx(std::exp(0.3) * std::sin(1.1)).epsilon(1e-8));
  CHECK(g(1) == doctest::Approx(std::exp(0.3) * std::cos(1.1)).epsilon(1e-8));

  auto vf = [](const Vec& x) {
    Vec out(2);
    out << x(0) * x(1), x(0) - x(1) * x(1);
    return out;
  };
  const confgeo::Mat j = fd::jacobian(vf, x, 1e-5, 2);
  CHECK(j(0, 0) == doctest::Approx(1.1).epsilon(1e-8));
  CHECK(j(0, 1) == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(j(1, 0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(j(1, 1) == doctest::Approx(-2.2).epsilon(1e-8));
}

TEST_CASE("sampled derivatives recover sin derivatives on a fine grid") {
  const int m = 201;
  std::vector<double> ts(m), f(m);
  for (int i = 0; i < m; ++i) {
    ts[i] = -1.0 + 2.0 * i / (m - 1);
    f[i] = std::sin(ts[i]);
  }
  const std::vector<double> d1 = fd::derivative_samples(ts, f, 1);
  const std::vector<double> d2 = fd::derivative_samples(ts, f, 2);
  const std::vector<double> d3 = fd::derivative_samples(ts, f, 3);
  double e1 = 0.0, e2 = 0.0, e3 = 0.0;
  for (int i = 0; i < m; ++i) {
    e1 = std::max(e1, std::abs(d1[i] - std::cos(ts[i])));
    e2 = std::max(e2, std::abs(d2[i] + std::sin(ts[i])));
    e3 = std::max(e3, std::abs(d3[i] + std::cos(ts[i])));
  }
  CHECK(e1 < 1e-10);
  CHECK(e2 < 1e-8);
  CHECK(e3 < 1e-6);
}

TEST_CASE("simpson integrates sin over [0, pi] and rejects even grids") {
  const int m = 101;
  std::vector<double> ts(m), f(m);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < m; ++i) {
    ts[i] = pi * i / (m - 1);
    f[i] = std::sin(ts[i]);
  }
  CHECK(fd::simpson(ts, f) == doctest::Approx(2.0).epsilon(1e-7));  // h^4 truncation ~ 2e-8

  std::vector<double> even_t(ts.begin(), ts.end() - 1), even_f(f.begin(), f.end() - 1);
  CHECK_THROWS_AS(fd::simpson(even_t, even_f), confgeo::BadParams);
}

TEST_CASE("adaptive simpson matches the composite rule") {
  const double pi = std::acos(-1.0);
  const double v = fd::adaptive_simpson([](double t) { return std::sin(t); }, 0.0, pi, 1e-12);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-11));
  const double w = fd::adaptive_simpson([](double t) { return std::exp(-t * t); }, -3.0, 3.0, 1e-12);
  CHECK(w == doctest::Approx(std::sqrt(pi) * std::erf(3.0)).epsilon(1e-9));
}
