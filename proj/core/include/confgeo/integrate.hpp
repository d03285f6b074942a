#pragma once

#include <functional>
#include <string>
#include <vector>

#include "confgeo/errors.hpp"
#include "confgeo/types.hpp"

namespace confgeo {

using Flow = std::function<Vec(double t, const Vec& y)>;

enum class Method { Rk4, Rkf45 };

struct IntegratorOptions {
  Method method = Method::Rkf45;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 1e-3;
  double min_step = 1e-13;
  long max_steps = 2'000'000;
  // rk4 only: fixed number of equal steps between consecutive sample times.
  int rk4_substeps = 16;
};

struct StepStats {
  long accepted = 0;
  long rejected = 0;
};

std::string method_name(Method m);
Method method_from_name(const std::string& name);

// Integrates dy/dt = flow(t, y) from times.front() and returns the state at
// every requested time (times must be non-decreasing; first entry is t0 and
// maps to y0).  The adaptive integrator (Fehlberg 4(5)) lands on each sample
// time exactly; rk4 subdivides each sample interval uniformly.
std::vector<Vec> integrate_dense(const Flow& flow, const Vec& y0,
                                 const std::vector<double>& times,
                                 const IntegratorOptions& opts = {},
                                 StepStats* stats = nullptr);

// Uniform grid helper: m+1 points from t0 to t1 inclusive.
std::vector<double> uniform_times(double t0, double t1, int m);

}  // namespace confgeo
