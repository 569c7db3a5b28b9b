#include <benchmark/benchmark.h>

#include <numbers>

#include "secdrive/analytic.hpp"
#include "secdrive/numerics.hpp"

using namespace secdrive;
using std::numbers::pi;

static void BM_MatExp(benchmark::State& state) {
  const Spin s = Spin::from_twice_j(static_cast<int>(state.range(0)));
  const Operator a = Complex(0, 0.7) * angular_momentum(s, Axis::y);
  for (auto _ : state) benchmark::DoNotOptimize(mat_exp(a));
}
BENCHMARK(BM_MatExp)->Arg(1)->Arg(3)->Arg(10);

static void BM_Integrator(benchmark::State& state) {
  const Spin s = Spin::from_twice_j(static_cast<int>(state.range(0)));
  const PulseSpec p = PulseSpec::secant(1.0);
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-10;
  const double t0 = -0.95 * pi, tf = 0.95 * pi;
  const State psi0 = invariant_eigenstate(p, s, t0, s.j());
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_schrodinger(p, s, psi0, t0, tf, cfg).steps_accepted);
  }
}
BENCHMARK(BM_Integrator)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_DiscretePhase(benchmark::State& state) {
  const Spin half(0.5);
  const auto n = static_cast<std::size_t>(state.range(0));
  const double delta = 1e-6 * pi;
  for (auto _ : state) {
    const auto states =
        sample_invariant_eigenstates(PulseSpec::secant(1.0), half, 0.5, -pi + delta, pi - delta, n);
    benchmark::DoNotOptimize(discrete_geometric_phase(states, true));
  }
}
BENCHMARK(BM_DiscretePhase)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_SolidAngle(benchmark::State& state) {
  const double delta = 1e-6 * pi;
  const auto path = sample_bloch_path(PulseSpec::secant(1.0), -pi + delta, pi - delta,
                                      static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solid_angle(path, true).solid_angle);
}
BENCHMARK(BM_SolidAngle)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_PhaseQuadrature(benchmark::State& state) {
  const Spin one(1.0);
  const PulseSpec p = PulseSpec::secant(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        phase_breakdown(p, one, 1.0, -0.99 * pi, 0.99 * pi, PhaseMethod::quadrature).geometric);
  }
}
BENCHMARK(BM_PhaseQuadrature)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
