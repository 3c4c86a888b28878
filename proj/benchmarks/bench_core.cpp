#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "l2flow/diffeo.hpp"
#include "l2flow/flow.hpp"
#include "l2flow/geometry.hpp"
#include "l2flow/tensor_geometry.hpp"

namespace {

using namespace l2flow;
constexpr double kPi = std::numbers::pi;

ScalarField torus_u(int n) {
  const auto bg = Background::flat_torus(2 * kPi, 2 * kPi, n, n);
  return ScalarField::sample_torus(bg, [](double x, double y) {
    return 0.2 * std::cos(x) * std::sin(y) + 0.1 * std::sin(2 * x + y);
  });
}

void BM_SpectralRoundTrip(benchmark::State& state) {
  const ScalarField u = torus_u(static_cast<int>(state.range(0)));
  const auto& fft = u.background().spectral();
  for (auto _ : state) benchmark::DoNotOptimize(fft.inverse(fft.forward(u.values())));
}
BENCHMARK(BM_SpectralRoundTrip)->Arg(64)->Arg(128)->Arg(256);

void BM_ScalarCurvature(benchmark::State& state) {
  const ConformalMetric g(torus_u(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(scalar_curvature(g));
}
BENCHMARK(BM_ScalarCurvature)->Arg(64)->Arg(128);

void BM_SphereCurvature(benchmark::State& state) {
  const auto bg = Background::sphere_axisym(static_cast<int>(state.range(0)));
  const ConformalMetric g(ScalarField::sample_sphere(bg, [](double th) { return 0.2 * std::cos(2 * th); }));
  for (auto _ : state) benchmark::DoNotOptimize(scalar_curvature(g));
}
BENCHMARK(BM_SphereCurvature)->Arg(256)->Arg(1024);

void BM_FlowStep(benchmark::State& state) {
  FlowConfig cfg;
  cfg.scheme = state.range(1) == 0 ? Scheme::SemiImplicit : Scheme::ExplicitRK4;
  cfg.dt_init = cfg.dt_max = 1e-4;
  const FlowState s = initial_state(torus_u(static_cast<int>(state.range(0))), cfg);
  for (auto _ : state) benchmark::DoNotOptimize(step(s, cfg));
}
BENCHMARK(BM_FlowStep)->Args({64, 0})->Args({128, 0})->Args({64, 1});

void BM_GradFGeneral(benchmark::State& state) {
  const ConformalMetric g(torus_u(static_cast<int>(state.range(0))));
  const MetricField m(g.tensor());
  const auto scheme = state.range(1) == 0 ? DerivativeScheme::Spectral : DerivativeScheme::CentralDifference;
  for (auto _ : state) benchmark::DoNotOptimize(grad_F_general(m, scheme));
}
BENCHMARK(BM_GradFGeneral)->Args({64, 0})->Args({64, 1});

void BM_PullbackMetric(benchmark::State& state) {
  const ConformalMetric g(torus_u(static_cast<int>(state.range(0))));
  const GridDiffeo phi = advance_diffeo(GridDiffeo::identity(g.background_ptr()), g, 1e-2);
  for (auto _ : state) benchmark::DoNotOptimize(pullback_metric(phi, g));
}
BENCHMARK(BM_PullbackMetric)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
