// Microbenchmarks for the hot paths: per-slot exponentials, full schedule
// evolution, and one GRAPE gradient evaluation.

#include <benchmark/benchmark.h>

#include <random>

#include "ladder/grape.hpp"

using namespace ladder;

namespace {

const PhysicalParams kParams = PhysicalParams::standard(20.0);

ControlMatrix random_controls(int slots, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-0.8, 0.8);
  ControlMatrix c;
  c.slot = 2.0;
  c.values.resize(kNumChannels, slots);
  for (int k = 0; k < slots; ++k)
    for (int r = 0; r < kNumChannels; ++r) c.values(r, k) = amp(rng);
  return c;
}

void BM_SlotPropagator128(benchmark::State& state) {
  const auto layout = build_row(7);
  const auto d = sample_disorder(layout, kParams, 0.02, 1);
  HamiltonianModel model(layout, kParams, d);
  ControlColumn u;
  u << 0.3, -0.2, 0.7, 0.1, -0.5, 0.9;
  const MatrixXc H = model.rwa_dense(u);
  for (auto _ : state) benchmark::DoNotOptimize(slot_propagator(H, 2.0));
}
BENCHMARK(BM_SlotPropagator128);

void BM_EvolveUnitaryRow7(benchmark::State& state) {
  const auto layout = build_row(7);
  const auto d = sample_disorder(layout, kParams, 0.02, 2);
  HamiltonianModel model(layout, kParams, d);
  const auto c = random_controls(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(evolve_unitary(model, c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvolveUnitaryRow7)->Arg(64)->Arg(256);

void BM_EvolveStateLadder15(benchmark::State& state) {
  const auto layout = build_ladder(2);  // 15 qubits, matrix-free path
  const auto d = sample_disorder(layout, kParams, 0.02, 3);
  HamiltonianModel model(layout, kParams, d);
  VectorXc psi0 = VectorXc::Zero(model.dim());
  psi0[0] = 1.0;
  const auto c = random_controls(8, 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(evolve_state(model, c, psi0));
}
BENCHMARK(BM_EvolveStateLadder15);

void BM_GrapeGradientRow7(benchmark::State& state) {
  const auto layout = build_row(7);
  const auto d = sample_disorder(layout, kParams, 0.02, 5);
  const ProtocolSpec shift{ProtocolKind::Shift, 1, Species::B, 1};
  const auto problem = make_protocol_problem(layout, shift, kParams, d);
  const auto c = random_controls(static_cast<int>(state.range(0)), 6);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        grape_gradient(problem, c, CostMode::StateSet));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GrapeGradientRow7)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
