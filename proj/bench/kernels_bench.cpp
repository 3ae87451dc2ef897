// Serial reference vs OpenMP kernels on a lifted optimal sphere with a Y3 bump.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "mcfa/evolution.hpp"
#include "mcfa/spherical_trajectory.hpp"

namespace {

mcfa::Evolution make(int band) {
  const auto base = mcfa::closed_form_n2({2, 2.0, 1.0, 1.0});
  auto grid = mcfa::SphereGrid::sphere2(band);
  const auto y = grid->harmonic(3, 1);
  const double pi = std::numbers::pi;
  return mcfa::Evolution::sample(
      grid, mcfa::TimeGrid::uniform_grid(1.0, 128),
      [&](std::size_t i, double t) { return base.r(t) + 0.05 * std::sin(pi * t) * y[i]; },
      [&](std::size_t i, double t) { return base.rdot(t) + 0.05 * pi * std::cos(pi * t) * y[i]; });
}

template <class F>
void run(benchmark::State& state, mcfa::Execution exec, F kernel) {
  const auto ev = make(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernel(ev, exec));
  state.counters["nodes"] = static_cast<double>(ev.nodes());
}

void action_serial(benchmark::State& s) { run(s, mcfa::Execution::serial, mcfa::action_kernel); }
void action_parallel(benchmark::State& s) { run(s, mcfa::Execution::parallel, mcfa::action_kernel); }
void energy_serial(benchmark::State& s) { run(s, mcfa::Execution::serial, mcfa::energy_kernel); }
void energy_parallel(benchmark::State& s) { run(s, mcfa::Execution::parallel, mcfa::energy_kernel); }
void el_serial(benchmark::State& s) { run(s, mcfa::Execution::serial, mcfa::el_kernel); }
void el_parallel(benchmark::State& s) { run(s, mcfa::Execution::parallel, mcfa::el_kernel); }

}  // namespace

BENCHMARK(action_serial)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(action_parallel)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(energy_serial)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(energy_parallel)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(el_serial)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(el_parallel)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
