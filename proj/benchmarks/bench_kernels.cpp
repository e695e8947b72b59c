#include <benchmark/benchmark.h>

#include "invasion/coupling_driver.hpp"

using namespace invasion;

namespace {

SimConfig config_at(int level) {
  SimConfig cfg;
  cfg.refine_level = level;
  return cfg;
}

}  // namespace

static void BM_CutSquare(benchmark::State& st) {
  const std::array<Vec2, 4> sq{Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
  const std::array<double, 4> vals{0.3, -0.2, -0.7, 0.1};
  for (auto _ : st) benchmark::DoNotOptimize(cut_square(sq, vals));
}
BENCHMARK(BM_CutSquare);

static void BM_ClassifyCells(benchmark::State& st) {
  const SimConfig cfg = config_at(static_cast<int>(st.range(0)));
  const GridMesh mesh = cfg.mesh();
  const LevelSetField phi = init_levelset(mesh, cfg.center(), cfg.R);
  for (auto _ : st) benchmark::DoNotOptimize(classify_cells(phi));
}
BENCHMARK(BM_ClassifyCells)->Arg(5)->Arg(7);

static void BM_MicroSolve(benchmark::State& st) {
  MicroParams p;
  p.n_elems = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(micro_solve(0.3, p));
}
BENCHMARK(BM_MicroSolve)->Arg(16)->Arg(64);

static void BM_MacroStep(benchmark::State& st) {
  const SimConfig cfg = config_at(static_cast<int>(st.range(0)));
  const GridMesh mesh = cfg.mesh();
  const auto cuts = classify_cells(init_levelset(mesh, cfg.center(), cfg.R));
  const MacroState start = initial_conditions(mesh, cfg.center(), cfg.R);
  for (auto _ : st) {
    MacroState s = start;
    benchmark::DoNotOptimize(macro_step(s, cuts, cfg.k, cfg.macro()));
  }
}
BENCHMARK(BM_MacroStep)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_TransportStep(benchmark::State& st) {
  const SimConfig cfg = config_at(static_cast<int>(st.range(0)));
  const GridMesh mesh = cfg.mesh();
  const LevelSetField phi = init_levelset(mesh, cfg.center(), cfg.R);
  VelocityField V(mesh);
  for (std::size_t c = 0; c < V.size(); ++c) V[c] = Vec2(0.3, 0.1);
  TransportSolver solver(mesh);
  for (auto _ : st) benchmark::DoNotOptimize(solver.step(phi, V, cfg.transport()));
}
BENCHMARK(BM_TransportStep)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_FullStep(benchmark::State& st) {
  const SimConfig cfg = config_at(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    Simulation sim(cfg);
    benchmark::DoNotOptimize(sim.step());
  }
}
BENCHMARK(BM_FullStep)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
