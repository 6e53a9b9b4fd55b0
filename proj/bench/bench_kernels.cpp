#include <benchmark/benchmark.h>

#include <limits>
#include <vector>

#include "llgwire/kernels.hpp"
#include "llgwire/llg.hpp"
#include "llgwire/modulation.hpp"
#include "llgwire/perturbation.hpp"
#include "llgwire/stationary.hpp"

using namespace llgwire;

namespace {

// grid sizes: the production grid and two refinements
Grid grid_for(int n) { return make_grid(15.0, 30.0 / (n - 1)); }

MagnetizationField state(const Grid& g) {
  const auto sol = solve_theta(0.1, g);
  return build_initial_data(sol, {0.1, 0.1, Direction::Explicit}).m0;
}

void BM_FusedSerial(benchmark::State& st) {
  const auto g = grid_for(static_cast<int>(st.range(0)));
  const auto m = state(g);
  std::vector<Vec3> out(m.size());
  const kernels::StepParams p{g.dx, 0.1, 1.0, 0.2 * g.dx * g.dx, true};
  for (auto _ : st) {
    benchmark::DoNotOptimize(kernels::llg_step(m.values(), out, p, std::numeric_limits<std::size_t>::max()));
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(m.size()));
}

void BM_FusedParallel(benchmark::State& st) {
  const auto g = grid_for(static_cast<int>(st.range(0)));
  const auto m = state(g);
  std::vector<Vec3> out(m.size());
  const kernels::StepParams p{g.dx, 0.1, 1.0, 0.2 * g.dx * g.dx, true};
  for (auto _ : st) benchmark::DoNotOptimize(kernels::llg_step(m.values(), out, p, 0));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(m.size()));
}

void BM_ReferenceStep(benchmark::State& st) {
  const auto g = grid_for(static_cast<int>(st.range(0)));
  const auto m = state(g);
  SimulationConfig cfg;
  cfg.grid = g;
  cfg.h0 = 0.1;
  cfg.dt = 0.2 * g.dx * g.dx;
  for (auto _ : st) benchmark::DoNotOptimize(step_reference(m, cfg));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(m.size()));
}

void BM_OrbitalDistance(benchmark::State& st) {
  const auto g = grid_for(static_cast<int>(st.range(0)));
  const auto sol = solve_theta(0.1, g);
  const auto m = state(g);
  for (auto _ : st) benchmark::DoNotOptimize(orbital_distance(sol, m));
}

}  // namespace

BENCHMARK(BM_FusedSerial)->Arg(151)->Arg(1501)->Arg(15001);
BENCHMARK(BM_FusedParallel)->Arg(151)->Arg(1501)->Arg(15001);
BENCHMARK(BM_ReferenceStep)->Arg(151)->Arg(1501)->Arg(15001);
BENCHMARK(BM_OrbitalDistance)->Arg(151)->Arg(301);

BENCHMARK_MAIN();
