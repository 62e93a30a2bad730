#include <benchmark/benchmark.h>

#include "ptkr/floquet.hpp"
#include "ptkr/observables.hpp"

namespace {

ptkr::SimParams params_for(int m) {
  ptkr::SimParams p;
  p.lattice_size = m;
  p.lambda = 0.01;
  p.epsilon = 1.0;
  return p;
}

// Warm state with a spread-out distribution, so entropy trimming does not
// short-circuit.
ptkr::WaveFunction warmed(const ptkr::FloquetEngine& engine, int kicks) {
  auto psi = ptkr::ground_product_state(engine.params());
  for (int i = 0; i < kicks; ++i) engine.step(psi);
  return psi;
}

void BM_Step(benchmark::State& state) {
  const ptkr::FloquetEngine engine(params_for(static_cast<int>(state.range(0))));
  auto psi = ptkr::ground_product_state(engine.params());
  for (auto _ : state) benchmark::DoNotOptimize(engine.step(psi));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Step)->Arg(64)->Arg(128)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_LinearEntropy(benchmark::State& state) {
  const ptkr::FloquetEngine engine(params_for(static_cast<int>(state.range(0))));
  const auto psi = warmed(engine, 50);
  for (auto _ : state) benchmark::DoNotOptimize(ptkr::linear_entropy(psi));
}
BENCHMARK(BM_LinearEntropy)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Moments(benchmark::State& state) {
  const ptkr::FloquetEngine engine(params_for(static_cast<int>(state.range(0))));
  const auto psi = warmed(engine, 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ptkr::momentum_moment(psi, ptkr::Particle::One, 2, 1.0));
  }
}
BENCHMARK(BM_Moments)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond);

void BM_BuildTables(benchmark::State& state) {
  const auto p = params_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ptkr::build_tables(p));
}
BENCHMARK(BM_BuildTables)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace
