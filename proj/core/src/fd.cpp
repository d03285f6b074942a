#include "confgeo/fd.hpp"

#include <algorithm>
#include <cmath>

namespace confgeo::fd {

// Fornberg, "Generation of finite difference formulas on arbitrarily spaced
// grids", Math. Comp. 51 (1988).  Returns the weights for the m-th derivative
// at x0 over the given nodes.
Vec stencil_weights(double x0, const std::vector<double>& xs, int m) {
  const int nd = static_cast<int>(xs.size()) - 1;
  if (nd < m) throw BadParams("stencil_weights: need more nodes than derivative order");
  // c[k][j]: weight of node j for the k-th derivative.
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(nd + 1, 0.0));
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= nd; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  Vec w(nd + 1);
  for (int j = 0; j <= nd; ++j) w(j) = c[m][j];
  return w;
}

namespace {

// Window [lo, lo+points) centered on node i, clamped to the grid.
std::pair<int, int> window(int i, int n, int points) {
  points = std::min(points, n);
  int lo = i - points / 2;
  lo = std::max(0, std::min(lo, n - points));
  return {lo, points};
}

}  // namespace

std::vector<Vec> derivative_samples(const std::vector<double>& ts,
                                    const std::vector<Vec>& f, int m,
                                    int points) {
  const int n = static_cast<int>(ts.size());
  if (n != static_cast<int>(f.size()) || n < m + 1)
    throw BadParams("derivative_samples: grid/sample mismatch");
  std::vector<Vec> out(n);
  for (int i = 0; i < n; ++i) {
    auto [lo, len] = window(i, n, points);
    std::vector<double> xs(ts.begin() + lo, ts.begin() + lo + len);
    Vec w = stencil_weights(ts[i], xs, m);
    Vec acc = Vec::Zero(f[0].size());
    for (int j = 0; j < len; ++j) acc += w(j) * f[lo + j];
    out[i] = acc;
  }
  return out;
}

std::vector<double> derivative_samples(const std::vector<double>& ts,
                                       const std::vector<double>& f, int m,
                                       int points) {
  std::vector<Vec> fv(f.size());
  for (size_t i = 0; i < f.size(); ++i) {
    fv[i] = Vec::Constant(1, f[i]);
  }
  auto dv = derivative_samples(ts, fv, m, points);
  std::vector<double> out(f.size());
  for (size_t i = 0; i < f.size(); ++i) out[i] = dv[i](0);
  return out;
}

double simpson(const std::vector<double>& ts, const std::vector<double>& f) {
  const size_t n = ts.size();
  if (n != f.size() || n < 3 || n % 2 == 0)
    throw BadParams("simpson: needs an odd number (>= 3) of uniform samples");
  const double h = (ts.back() - ts.front()) / static_cast<double>(n - 1);
  double acc = f.front() + f.back();
  for (size_t i = 1; i + 1 < n; ++i) acc += f[i] * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

namespace {

double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace confgeo::fd
