#pragma once

#include <functional>
#include <string>
#include <vector>

#include "confgeo/dynamics.hpp"
#include "confgeo/geometry.hpp"
#include "confgeo/integrate.hpp"
#include "confgeo/trajectory.hpp"
#include "confgeo/types.hpp"

namespace confgeo {

// Vector field along a base curve, with analytic time derivatives.
struct VariationField {
  std::function<Vec(double)> v, dv, d2v;
};

// Smooth bump variation supported inside (t0, t1): all derivatives vanish at
// the endpoints, so V = D(V) = D^2(V) = 0 there.  mode 0 is the plain bump,
// mode 1 multiplies by the odd factor tau.
VariationField bump_variation(double t0, double t1, const Vec& direction, int mode = 0);

// I[gamma] = integral of L dt, composite Simpson on the sample grid
// (odd sample count).  States must carry 3-jets.
double functional_I(const MetricSpec& spec, const std::vector<double>& ts,
                    const std::vector<CurveState>& states, const FdOptions& fd = {});
// Convenience: sample an analytic curve on a uniform grid first.
double functional_I(const MetricSpec& spec, const CurveModel& model, double t0, double t1,
                    int samples = 801, const FdOptions& fd = {});

// Action of the perturbed curve x + sV through the exact split
// I = int L1 dt + [<U,A>/|U|^2].  Every ingredient is a 2-jet, so the value
// is free of re-jetting noise; differencing it in s gives a clean quotient.
double perturbed_functional(const MetricSpec& spec, const CurveModel& model,
                            const VariationField& var, double s, double t0, double t1,
                            int samples = 801, const FdOptions& fd = {});

// D(V) and D^2(V) along the base curve at time t, fully analytic given the
// model and variation derivatives.
struct DopJet {
  Vec v, dv_op, d2v_op;  // V, D(V), D^2(V)
};
DopJet d_op_jet(const MetricSpec& spec, const CurveModel& model, const VariationField& var,
                double t, const FdOptions& fd = {});

// First variation split per the variational identity:
//   delta I = integral |U|^-2 (<K,V> - <E - 2LU, D(V)>) dt  +  B(V) |_{t0}^{t1},
//   B(V) = |U|^-2 (<U, D^2(V)> - <E - 2LU, V>).
struct FirstVariation {
  double integral_term = 0.0;
  double boundary_term = 0.0;
  double total() const { return integral_term + boundary_term; }
};
// Boundary density B(V) = |U|^-2 (<U, D^2 V> - <E - 2 L U, V>) at time t.
double boundary_term(const MetricSpec& spec, const CurveModel& model,
                     const VariationField& var, double t, const FdOptions& fd = {});

FirstVariation first_variation_formula(const MetricSpec& spec, const CurveModel& model,
                                       const VariationField& var, double t0, double t1,
                                       int samples = 401, const FdOptions& fd = {});

// Independent finite-difference variation: (I[X + sV] - I[X - sV]) / 2s with
// Richardson extrapolation in s.  The perturbed curves are re-jetted from
// position samples alone (t-stencils), so this path shares no derivative
// code with the formula above.
struct FdVariationOptions {
  double s = 0.02;
  int grid = 2001;     // position samples per perturbed curve
  int stencil = 6;     // t-stencil width for re-jetting
  bool richardson = true;
};
double first_variation_fd(const MetricSpec& spec, const CurveModel& model,
                          const VariationField& var, double t0, double t1,
                          const FdVariationOptions& opts = {}, const FdOptions& fd = {});

// Stationarity of I under the compact-support panel of bump variations.
struct StationarityReport {
  std::vector<double> variations;  // delta I per panel member
  double max_abs_variation = 0.0;
  int witness_index = -1;
  bool stationary = false;
};
StationarityReport stationarity_check(const MetricSpec& spec, const CurveModel& model,
                                      double t0, double t1, double tolerance,
                                      int samples = 401, const FdOptions& fd = {});

// Two-point boundary value problem for the fourth-order flow, solved by
// shooting over (A0, J0) with Levenberg-Marquardt.
struct BvpProblem {
  MetricSpec metric;
  Vec x0, u0;  // state at t0
  Vec x1, u1;  // target at t1
  double t0 = 0.0, t1 = 1.0;
};
struct BvpTraceRow {
  int iteration = 0;
  double residual = 0.0;
  double damping = 0.0;
};
struct BvpResult {
  Trajectory trajectory;
  Vec a0, j0;
  std::vector<BvpTraceRow> trace;
  int iterations = 0;
  double residual = 0.0;
};
struct BvpOptions {
  double tolerance = 1e-8;
  int max_iterations = 100;
  double initial_damping = 1e-3;
  double jacobian_step = 1e-6;
  int output_samples = 65;  // sample count of the returned trajectory
};
BvpResult bvp_shoot(const BvpProblem& problem, Vec a0_guess = {}, Vec j0_guess = {},
                    const BvpOptions& opts = {}, const IntegratorOptions& iopts = {},
                    const FdOptions& fd = {});

}  // namespace confgeo
