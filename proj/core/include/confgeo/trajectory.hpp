#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "confgeo/dynamics.hpp"
#include "confgeo/geometry.hpp"
#include "confgeo/integrate.hpp"
#include "confgeo/types.hpp"

namespace confgeo {

// A sampled solution curve together with the provenance needed to reproduce it.
struct Trajectory {
  std::vector<double> t;
  std::vector<CurveState> states;
  std::string metric_id;
  std::string equation_id;
  std::string method;
  double abs_tol = 0.0;
  double rel_tol = 0.0;
  StepStats steps;
};

// CSV columns, in this order: t, x0..x{n-1}, u0.., a0.., and j0.. when present.
// Values are printed with %.17g so a written file round-trips bit exactly.
void write_csv(const Trajectory& traj, std::ostream& os);
void write_json(const Trajectory& traj, std::ostream& os);
void save_trajectory(const Trajectory& traj, const std::string& path,
                     const std::string& format);  // format: "csv" or "json"

// Third order flow: state (x, U, A) with A = covariant acceleration.
Trajectory integrate_cg3(const MetricSpec& spec, const CurveState& init,
                         const std::vector<double>& times,
                         const IntegratorOptions& opts = {}, const FdOptions& fd = {});

// Fourth order flow: state (x, U, A, J), J = covariant jerk.  The initial J
// may be supplied explicitly; otherwise it is lifted from the third order
// equation so the two flows start on the same curve.
Trajectory integrate_mercator4(const MetricSpec& spec, const CurveState& init,
                               const std::vector<double>& times,
                               const IntegratorOptions& opts = {},
                               const FdOptions& fd = {});

// Flat-background conserved-vector form: valid only for kind == Flat.
// If c_vector is empty it is evaluated from the initial 2-jet.
Trajectory integrate_flat_cform(const MetricSpec& spec, const CurveState& init,
                                const std::vector<double>& times, Vec c_vector = {},
                                const IntegratorOptions& opts = {});

// Metric geodesics, state (x, U); stored A is identically zero.
Trajectory integrate_geodesic(const MetricSpec& spec, const CurveState& init,
                              const std::vector<double>& times,
                              const IntegratorOptions& opts = {}, const FdOptions& fd = {});

// Unit-speed third order flow: state (x, U, A) with the arclength right side.
Trajectory integrate_arclength_cg(const MetricSpec& spec, const CurveState& init,
                                  const std::vector<double>& times,
                                  const IntegratorOptions& opts = {},
                                  const FdOptions& fd = {});

// An analytically known curve: position and its first three time derivatives.
struct CurveModel {
  std::function<Vec(double)> x;
  std::function<Vec(double)> dx;
  std::function<Vec(double)> d2x;
  std::function<Vec(double)> d3x;
};

// Covariant 3-jet of a model curve: A^a = x''^a + G^a_bc x'^b x'^c and
// J^a = x'''^a + dG^a_bc,e x'^e x'^b x'^c + 2 G^a_bc x''^b x'^c + G^a_bc x'^b A^c.
CurveState jet_at(const MetricSpec& spec, const CurveModel& model, double t,
                  const FdOptions& fd = {});
std::vector<CurveState> jets_along(const MetricSpec& spec, const CurveModel& model,
                                   const std::vector<double>& times,
                                   const FdOptions& fd = {});

// Covariant jets recovered from position samples alone (stencil derivatives).
std::vector<CurveState> jets_from_positions(const MetricSpec& spec,
                                            const std::vector<double>& times,
                                            const std::vector<Vec>& xs, int points = 7,
                                            const FdOptions& fd = {});

Trajectory trajectory_from_model(const MetricSpec& spec, const CurveModel& model,
                                 const std::vector<double>& times,
                                 const std::string& equation_id = "model",
                                 const FdOptions& fd = {});

}  // namespace confgeo
