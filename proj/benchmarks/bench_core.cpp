// Microbenchmarks for the hot paths: geometry jet assembly at each curvature
// level, the flow right-hand sides, and a full adaptive integration.
#include <benchmark/benchmark.h>

#include "confgeo/dynamics.hpp"
#include "confgeo/geometry.hpp"
#include "confgeo/integrate.hpp"
#include "confgeo/oracles.hpp"
#include "confgeo/trajectory.hpp"

using namespace confgeo;

namespace {

Vec probe_point() {
  Vec x(3);
  x << 0.3, -0.2, 0.5;
  return x;
}

CurveState probe_state() {
  CurveState st;
  st.x = probe_point();
  st.u = Vec(3);
  st.u << 1.0, 0.4, -0.2;
  st.a = Vec(3);
  st.a << -0.3, 0.8, 0.1;
  st.j = Vec(3);
  *st.j << 0.2, -0.5, 0.6;
  return st;
}

void bm_geometry_jet(benchmark::State& state, const MetricSpec& spec, JetLevel level) {
  const Vec x = probe_point();
  for (auto _ : state) benchmark::DoNotOptimize(geometry_jet(spec, x, level));
}

void bench_sphere_curvature(benchmark::State& state) {
  bm_geometry_jet(state, MetricSpec::round_sphere_stereographic(3), JetLevel::Curvature);
}
BENCHMARK(bench_sphere_curvature);

void bench_sphere_full(benchmark::State& state) {
  bm_geometry_jet(state, MetricSpec::round_sphere_stereographic(3), JetLevel::Full);
}
BENCHMARK(bench_sphere_full);

// An opaque metric forces the nested finite-difference path.
void bench_opaque_full(benchmark::State& state) {
  const MetricSpec sphere = MetricSpec::round_sphere_stereographic(3);
  const MetricSpec opaque =
      MetricSpec::general(3, [sphere](const Vec& x) { return sphere.g(x); }, "sphere-opaque");
  bm_geometry_jet(state, opaque, JetLevel::Full);
}
BENCHMARK(bench_opaque_full);

void bench_cg3_rhs(benchmark::State& state) {
  const MetricSpec spec = MetricSpec::round_sphere_stereographic(3);
  const CurveState st = probe_state();
  const GeometryJet jet = geometry_jet(spec, st.x, JetLevel::Curvature);
  for (auto _ : state) benchmark::DoNotOptimize(cg3_rhs(jet, st));
}
BENCHMARK(bench_cg3_rhs);

void bench_mercator4_rhs(benchmark::State& state) {
  const MetricSpec spec = MetricSpec::round_sphere_stereographic(3);
  const CurveState st = probe_state();
  const GeometryJet jet = geometry_jet(spec, st.x, JetLevel::Full);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mercator_f(jet, st));
    benchmark::DoNotOptimize(k_vector(jet, st));
  }
}
BENCHMARK(bench_mercator4_rhs);

void bench_integrate_circle(benchmark::State& state) {
  const MetricSpec flat3 = MetricSpec::flat_euclidean(3);
  CurveState init;
  init.x = Vec::Zero(3);
  init.u = Vec::Unit(3, 0);
  init.a = Vec::Unit(3, 1);
  const std::vector<double> times = uniform_times(0.0, 1.0, 100);
  IntegratorOptions opts;
  opts.abs_tol = opts.rel_tol = 1e-10;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_cg3(flat3, init, times, opts));
}
BENCHMARK(bench_integrate_circle);

void bench_integrate_loxodrome(benchmark::State& state) {
  const MetricSpec sphere3 = MetricSpec::round_sphere_stereographic(3);
  const CurveModel model = oracles::spiral_model(oracles::make_spiral(
      Vec(0.7 * Vec::Unit(3, 0)), Vec(0.7 * Vec::Unit(3, 1)), Vec::Zero(3), 2.5, 0.9));
  const CurveState init = jet_at(sphere3, model, 0.0);
  const std::vector<double> times = uniform_times(0.0, 1.0, 50);
  IntegratorOptions opts;
  opts.abs_tol = opts.rel_tol = 1e-10;
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate_mercator4(sphere3, init, times, opts));
}
BENCHMARK(bench_integrate_loxodrome);

}  // namespace

BENCHMARK_MAIN();
