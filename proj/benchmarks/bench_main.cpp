#include <benchmark/benchmark.h>

#include <vector>

#include "noisy_amp/channels.hpp"
#include "noisy_amp/experiments.hpp"
#include "noisy_amp/metrics.hpp"
#include "noisy_amp/scissor.hpp"

using namespace noisy_amp;

static void BM_Displacement(benchmark::State& state) {
  const HilbertSpec spec(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(displacement_operator(cplx(0.7, 0.4), spec));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Displacement)->RangeMultiplier(2)->Range(32, 512)->Complexity();

static void BM_PilaCoherent(benchmark::State& state) {
  const HilbertSpec spec(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pila_coherent(0.2, 1.2, spec));
}
BENCHMARK(BM_PilaCoherent)->RangeMultiplier(2)->Range(32, 256);

static void BM_PilaChannel(benchmark::State& state) {
  const HilbertSpec spec(static_cast<std::size_t>(state.range(0)));
  const DensityOperator rho = DensityOperator::from_ket(coherent_ket(0.5, spec));
  for (auto _ : state) benchmark::DoNotOptimize(pila_channel(rho, 1.2));
}
BENCHMARK(BM_PilaChannel)->RangeMultiplier(2)->Range(32, 128);

static void BM_BeamSplitter(benchmark::State& state) {
  const HilbertSpec spec(static_cast<std::size_t>(state.range(0)));
  const HilbertSpec ancilla(8);
  for (auto _ : state) benchmark::DoNotOptimize(beam_splitter(0.99, spec, ancilla));
}
BENCHMARK(BM_BeamSplitter)->RangeMultiplier(2)->Range(16, 128);

static void BM_EvaluatePipeline(benchmark::State& state) {
  const PhotonicOp op = PhotonicOp::subtract(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_pipeline(0.2, 1.5, op));
}
BENCHMARK(BM_EvaluatePipeline)->Arg(1)->Arg(2);

static void BM_WignerGrid(benchmark::State& state) {
  const PipelineState s = run_pipeline(0.2, 1.2, PhotonicOp::add(1), HilbertSpec(54));
  std::vector<cplx> grid;
  for (int i = -20; i <= 20; ++i) grid.emplace_back(0.1 * i, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(wigner(s.state, grid));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}
BENCHMARK(BM_WignerGrid);

static void BM_PhaseAverage(benchmark::State& state) {
  const PhotonicOp op = PhotonicOp::coherent_ratio(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(phase_average_all(0.2, op, 1.2, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_PhaseAverage)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_CircuitOracle(benchmark::State& state) {
  const HilbertSpec spec(14);
  const Ket psi = coherent_ket(0.3, spec);
  const ScissorConfig cfg(static_cast<int>(state.range(0)), 1.4, spec);
  for (auto _ : state) benchmark::DoNotOptimize(circuit_oracle(psi, cfg));
}
BENCHMARK(BM_CircuitOracle)->DenseRange(1, 3);

static void BM_CalibrateSubtraction(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(subtraction_at_target(1.0, 2.0, 0.99));
}
BENCHMARK(BM_CalibrateSubtraction)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
