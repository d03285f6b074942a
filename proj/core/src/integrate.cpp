#include "confgeo/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace confgeo {

std::string method_name(Method m) { return m == Method::Rk4 ? "rk4" : "rkf45"; }

Method method_from_name(const std::string& name) {
  if (name == "rk4") return Method::Rk4;
  if (name == "rkf45") return Method::Rkf45;
  throw ConfigError("unknown integrator method: " + name);
}

std::vector<double> uniform_times(double t0, double t1, int m) {
  if (m < 1) throw BadParams("uniform_times: need at least one interval");
  std::vector<double> ts(m + 1);
  for (int i = 0; i <= m; ++i) ts[i] = t0 + (t1 - t0) * static_cast<double>(i) / m;
  ts.back() = t1;
  return ts;
}

namespace {

Vec rk4_step(const Flow& f, double t, const Vec& y, double h) {
  const Vec k1 = f(t, y);
  const Vec k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
  const Vec k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
  const Vec k4 = f(t + h, y + h * k3);
  return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Fehlberg 4(5) pair.
struct Rkf45Result {
  Vec y4, y5;
};

Rkf45Result rkf45_step(const Flow& f, double t, const Vec& y, double h) {
  static const double a2 = 1.0 / 4.0;
  static const double a3[] = {3.0 / 32.0, 9.0 / 32.0};
  static const double a4[] = {1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0};
  static const double a5[] = {439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0};
  static const double a6[] = {-8.0 / 27.0, 2.0, -3544.0 / 2565.0, 1859.0 / 4104.0,
                              -11.0 / 40.0};
  static const double c[] = {0.0, 1.0 / 4.0, 3.0 / 8.0, 12.0 / 13.0, 1.0, 0.5};
  static const double b4[] = {25.0 / 216.0, 0.0, 1408.0 / 2565.0, 2197.0 / 4104.0,
                              -1.0 / 5.0, 0.0};
  static const double b5[] = {16.0 / 135.0, 0.0, 6656.0 / 12825.0, 28561.0 / 56430.0,
                              -9.0 / 50.0, 2.0 / 55.0};
  const Vec k1 = f(t, y);
  const Vec k2 = f(t + c[1] * h, y + h * (a2 * k1));
  const Vec k3 = f(t + c[2] * h, y + h * (a3[0] * k1 + a3[1] * k2));
  const Vec k4 = f(t + c[3] * h, y + h * (a4[0] * k1 + a4[1] * k2 + a4[2] * k3));
  const Vec k5 = f(t + c[4] * h, y + h * (a5[0] * k1 + a5[1] * k2 + a5[2] * k3 + a5[3] * k4));
  const Vec k6 = f(t + c[5] * h,
                   y + h * (a6[0] * k1 + a6[1] * k2 + a6[2] * k3 + a6[3] * k4 + a6[4] * k5));
  Rkf45Result r;
  r.y4 = y + h * (b4[0] * k1 + b4[2] * k3 + b4[3] * k4 + b4[4] * k5);
  r.y5 = y + h * (b5[0] * k1 + b5[2] * k3 + b5[3] * k4 + b5[4] * k5 + b5[5] * k6);
  return r;
}

}  // namespace

std::vector<Vec> integrate_dense(const Flow& flow, const Vec& y0,
                                 const std::vector<double>& times,
                                 const IntegratorOptions& opts, StepStats* stats) {
  if (times.empty()) throw BadParams("integrate_dense: no sample times");
  for (size_t i = 1; i < times.size(); ++i)
    if (times[i] < times[i - 1])
      throw BadParams("integrate_dense: sample times must be non-decreasing");
  StepStats local;
  StepStats& st = stats != nullptr ? *stats : local;
  std::vector<Vec> out;
  out.reserve(times.size());
  out.push_back(y0);

  Vec y = y0;
  double t = times.front();

  if (opts.method == Method::Rk4) {
    for (size_t i = 1; i < times.size(); ++i) {
      const double span = times[i] - t;
      const int m = std::max(1, opts.rk4_substeps);
      const double h = span / m;
      for (int k = 0; k < m; ++k) {
        y = rk4_step(flow, t + k * h, y, h);
        ++st.accepted;
      }
      t = times[i];
      out.push_back(y);
    }
    return out;
  }

  // rkf45: adapt the step but never step past the next sample time.
  double h = opts.initial_step;
  for (size_t i = 1; i < times.size(); ++i) {
    const double target = times[i];
    while (t < target) {
      h = std::min(h, target - t);
      if (h < opts.min_step)
        throw StepSizeUnderflow("adaptive step underflow at t = " + std::to_string(t));
      if (st.accepted + st.rejected > opts.max_steps)
        throw NoConvergence("integrate_dense: step budget exhausted",
                            static_cast<int>(st.accepted), h);
      const Rkf45Result r = rkf45_step(flow, t, y, h);
      double err = 0.0;
      for (Eigen::Index k = 0; k < y.size(); ++k) {
        const double sc = opts.abs_tol +
                          opts.rel_tol * std::max(std::abs(r.y4(k)), std::abs(y(k)));
        err = std::max(err, std::abs(r.y5(k) - r.y4(k)) / sc);
      }
      if (err <= 1.0) {
        t += h;
        y = r.y5;  // local extrapolation
        ++st.accepted;
      } else {
        ++st.rejected;
      }
      const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::clamp(fac, 0.2, 5.0);
    }
    out.push_back(y);
  }
  return out;
}

}  // namespace confgeo
