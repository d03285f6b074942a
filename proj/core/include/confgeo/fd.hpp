#pragma once

#include <functional>
#include <vector>

#include "confgeo/errors.hpp"
#include "confgeo/types.hpp"

namespace confgeo::fd {

// Fornberg weights: coefficients w_i so that f^(m)(x0) ~ sum_i w_i f(xs[i]).
// Classic recursion; works for arbitrary (distinct) nodes, uniform or not.
Vec stencil_weights(double x0, const std::vector<double>& xs, int m);

// Central difference of a scalar/vector/matrix-valued function of x in
// direction e_c.  order 2 uses the 2-point stencil with step h; order 4 the
// 4-point one.  F must be callable as F(const Vec&) returning V supporting
// scalar multiplication and addition.
template <class F>
auto directional_diff(F&& f, const Vec& x, int c, double h, int order = 2) {
  Vec xp = x;
  if (order == 4) {
    xp(c) = x(c) + h;
    auto f1 = f(xp);
    xp(c) = x(c) - h;
    auto fm1 = f(xp);
    xp(c) = x(c) + 2.0 * h;
    auto f2 = f(xp);
    xp(c) = x(c) - 2.0 * h;
    auto fm2 = f(xp);
    return decltype(f1)((8.0 * (f1 - fm1) - (f2 - fm2)) / (12.0 * h));
  }
  xp(c) = x(c) + h;
  auto fp = f(xp);
  xp(c) = x(c) - h;
  auto fm = f(xp);
  return decltype(fp)((fp - fm) / (2.0 * h));
}

// Gradient of a scalar function, one directional_diff per coordinate.
template <class F>
Vec gradient(F&& f, const Vec& x, double h, int order = 2) {
  const int n = static_cast<int>(x.size());
  Vec g(n);
  for (int c = 0; c < n; ++c)
    g(c) = directional_diff([&](const Vec& y) { return f(y); }, x, c, h, order);
  return g;
}

// Jacobian d f_i / d x_j of f: R^n -> R^m.
template <class F>
Mat jacobian(F&& f, const Vec& x, double h, int order = 2) {
  const int n = static_cast<int>(x.size());
  Mat jac;
  for (int c = 0; c < n; ++c) {
    Vec col = directional_diff(f, x, c, h, order);
    if (jac.size() == 0) jac.resize(col.size(), n);
    jac.col(c) = col;
  }
  return jac;
}

// Derivatives of sampled data along a 1-d grid.  Each node uses a
// `points`-wide Fornberg stencil, centered where possible and shifted at the
// ends.  ts must be strictly increasing; f.size() == ts.size().
std::vector<Vec> derivative_samples(const std::vector<double>& ts,
                                    const std::vector<Vec>& f, int m,
                                    int points = 7);
std::vector<double> derivative_samples(const std::vector<double>& ts,
                                       const std::vector<double>& f, int m,
                                       int points = 7);

// Composite Simpson rule on a uniform grid with an odd number of samples.
double simpson(const std::vector<double>& ts, const std::vector<double>& f);

// Adaptive Simpson quadrature (independent route for cross-checks).
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol);

}  // namespace confgeo::fd
