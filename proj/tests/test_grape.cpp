#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ladder/grape.hpp"

using namespace ladder;

namespace {
constexpr double kPi = std::numbers::pi;
const PhysicalParams kP20 = PhysicalParams::standard(20.0);

GrapeProblem small_shift_problem() {
  const auto chain = build_row(3);  // A B A
  const auto d = sample_disorder(chain, kP20, 0.02, 77);
  ProtocolSpec shift;
  shift.kind = ProtocolKind::Shift;
  shift.icc_position = 1;
  return make_protocol_problem(chain, shift, kP20, d);
}

ControlMatrix random_controls(int slots, double slot, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-0.6, 0.6);
  ControlMatrix c;
  c.slot = slot;
  c.values.resize(kNumChannels, slots);
  for (int k = 0; k < slots; ++k)
    for (int r = 0; r < kNumChannels; ++r) c.values(r, k) = amp(rng);
  return c;
}
}  // namespace

TEST_CASE("gradient matches central finite differences (both modes)") {
  const auto problem = small_shift_problem();
  const auto c = random_controls(3, 2.0, 9);
  for (CostMode mode : {CostMode::StateSet, CostMode::Unitary}) {
    double cost0 = 0;
    const GradientMatrix g = grape_gradient(problem, c, mode, &cost0);
    REQUIRE(g.cols() == 3);
    CHECK(cost0 > 0);
    CHECK(cost0 <= 1.0 + 1e-12);

    const double h = 1e-6;
    for (int k = 0; k < 3; ++k)
      for (int r = 0; r < kNumChannels; ++r) {
        ControlMatrix cp = c, cm = c;
        cp.values(r, k) += h;
        cm.values(r, k) -= h;
        double fp = 0, fm = 0;
        grape_gradient(problem, cp, mode, &fp);
        grape_gradient(problem, cm, mode, &fm);
        const double fd = (fp - fm) / (2 * h);
        CHECK(std::abs(g(r, k) - fd) <
              1e-6 + 1e-5 * std::max(std::abs(fd), std::abs(g(r, k))));
      }
  }
}

TEST_CASE("zero-slot controls give empty gradient and identity cost") {
  const auto problem = small_shift_problem();
  ControlMatrix c;
  c.slot = 2.0;
  c.values.resize(kNumChannels, 0);
  double cost = -1;
  const GradientMatrix g =
      grape_gradient(problem, c, CostMode::StateSet, &cost);
  CHECK(g.cols() == 0);
  // identity is a poor shift, but a valid cost in [0, 1]
  CHECK(cost >= 0.0);
  CHECK(cost <= 1.0 + 1e-12);
}

TEST_CASE("warm-start iteration-0 cost equals the naive infidelity") {
  const auto chain = build_row(7);
  const auto d = sample_disorder(chain, kP20, 0.01, 4);
  ProtocolSpec shift;
  shift.kind = ProtocolKind::Shift;
  shift.icc_position = 1;
  const auto problem = make_protocol_problem(chain, shift, kP20, d);
  const auto warm = warm_start_controls(chain, shift, kP20, 2.0);

  double cost = 0;
  grape_gradient(problem, warm, CostMode::StateSet, &cost);
  const auto rep =
      averaged_fidelity(shift, chain, kP20, d, warm, kTrainingP);
  CHECK(std::abs(cost - (1.0 - rep.mean)) < 1e-9);
}

TEST_CASE("warm start without jitter is the discretized naive schedule") {
  const auto chain = build_row(7);
  ProtocolSpec shift;
  shift.kind = ProtocolKind::Shift;
  shift.icc_position = 1;
  const auto warm = warm_start_controls(chain, shift, kP20, 2.0);
  const auto direct =
      schedule_to_controls(naive_schedule(chain, shift, kP20), 2.0);
  CHECK((warm.values - direct.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(warm.slot == 2.0);

  // jitter respects the clamp and is seed-reproducible
  const auto j1 = warm_start_controls(chain, shift, kP20, 2.0, 0.3, 5);
  const auto j2 = warm_start_controls(chain, shift, kP20, 2.0, 0.3, 5);
  CHECK((j1.values - j2.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(j1.values.maxCoeff() <= 1.0);
  CHECK(j1.values.minCoeff() >= -1.0);
  CHECK((j1.values - warm.values).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("optimize reduces the cost of a detuned start") {
  // disorder-free identity target: zero controls solve it exactly, so the
  // optimizer must be able to drive the cost far below the random start
  // (a full shift target would be unreachable in a 40 ns window)
  const auto chain = build_row(3);
  const auto d0 = DisorderRealization::zero(chain);
  ProtocolSpec ident;
  ident.kind = ProtocolKind::Identity;
  ident.icc_position = 1;
  const auto problem = make_protocol_problem(chain, ident, kP20, d0);
  const auto start = random_controls(20, 2.0, 31);
  GrapeConfig cfg;
  cfg.max_iters = 400;
  cfg.cost_tolerance = 1e-9;
  const auto res = optimize(problem, start, cfg);
  REQUIRE(!res.cost_trajectory.empty());
  CHECK(res.final_cost < 0.1 * res.cost_trajectory.front());
  CHECK(res.final_cost <= *std::min_element(res.cost_trajectory.begin(),
                                            res.cost_trajectory.end()) +
                              1e-15);
  CHECK(res.iterations <= cfg.max_iters);
  CHECK(!res.diverged);
  CHECK(res.controls.values.cwiseAbs().maxCoeff() <= cfg.amplitude_bound);
  CHECK(res.wall_seconds > 0);
}

TEST_CASE("optimizer is deterministic") {
  const auto problem = small_shift_problem();
  const auto start = random_controls(12, 2.0, 8);
  GrapeConfig cfg;
  cfg.max_iters = 25;
  const auto a = optimize(problem, start, cfg);
  const auto b = optimize(problem, start, cfg);
  CHECK((a.controls.values - b.controls.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.final_cost == b.final_cost);
  CHECK(a.cost_trajectory == b.cost_trajectory);
}

TEST_CASE("tighter amplitude bound is enforced during optimization") {
  const auto problem = small_shift_problem();
  const auto start = random_controls(12, 2.0, 3);
  GrapeConfig cfg;
  cfg.max_iters = 40;
  cfg.amplitude_bound = 0.6;
  const auto res = optimize(problem, start, cfg);
  CHECK(res.controls.values.cwiseAbs().maxCoeff() <= 0.6 + 1e-15);
}

TEST_CASE("reduced-time with scale 1 reproduces the full optimization") {
  const auto problem = small_shift_problem();
  const auto start = random_controls(16, 2.0, 12);
  GrapeConfig cfg;
  cfg.max_iters = 15;
  const auto full = optimize(problem, start, cfg);
  const auto same = optimize_reduced_time(problem, start, cfg, 1.0);
  CHECK((full.controls.values - same.controls.values).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(full.final_cost == same.final_cost);
}

TEST_CASE("reduced-time compresses the slot grid") {
  const auto problem = small_shift_problem();
  const auto start = random_controls(20, 2.0, 12);
  GrapeConfig cfg;
  cfg.max_iters = 5;
  const auto res = optimize_reduced_time(problem, start, cfg, 0.5);
  CHECK(res.controls.slots() == 10);
  CHECK(res.controls.slot == 2.0);
  CHECK_THROWS(optimize_reduced_time(problem, start, cfg, 0.0));
  CHECK_THROWS(optimize_reduced_time(problem, start, cfg, 1.5));
}

TEST_CASE("unitary-mode cost agrees with the trace metric") {
  const auto problem = small_shift_problem();
  const auto c = random_controls(6, 2.0, 44);
  double cost = 0;
  grape_gradient(problem, c, CostMode::Unitary, &cost);
  HamiltonianModel model(problem.layout, kP20, problem.disorder);
  const auto X = evolve_unitary(model, c);
  CHECK(std::abs(cost - trace_cost(X, problem.target_unitary)) < 1e-12);
}

TEST_CASE("state-set training pairs are consistent") {
  const auto problem = small_shift_problem();
  REQUIRE(problem.initial_states.size() == kTrainingP.size());
  REQUIRE(problem.target_states.size() == kTrainingP.size());
  for (std::size_t i = 0; i < problem.initial_states.size(); ++i) {
    CHECK(std::abs(problem.initial_states[i].norm() - 1.0) < 1e-12);
    CHECK(std::abs(problem.target_states[i].norm() - 1.0) < 1e-12);
  }
  CHECK(problem.target_unitary.rows() == 8);
  CHECK((problem.target_unitary.adjoint() * problem.target_unitary -
         MatrixXc::Identity(8, 8))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("resilience sweep at zero spread reproduces the base fidelity") {
  const auto chain = build_row(3);
  const auto base = sample_disorder(chain, kP20, 0.02, 21);
  ProtocolSpec shift;
  shift.kind = ProtocolKind::Shift;
  shift.icc_position = 1;
  const auto controls =
      schedule_to_controls(naive_schedule(chain, shift, kP20), 2.0);
  const auto grid = default_p_grid(5);
  const auto reports = resilience_sweep(chain, kP20, shift, base, controls,
                                        {0.0, 2 * kPi * 1e-3}, 3, 99, grid);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].epsilon == 0.0);
  CHECK(reports[0].n_samples == 3);
  const double fbar0 =
      averaged_fidelity(shift, chain, kP20, base, controls, grid).mean;
  for (const auto& e : reports[0].entries)
    CHECK(e.fidelity == doctest::Approx(fbar0).epsilon(1e-12));
  // nonzero spread: samples actually vary
  CHECK(reports[1].std_dev > 0.0);
  // determinism
  const auto again = resilience_sweep(chain, kP20, shift, base, controls,
                                      {0.0, 2 * kPi * 1e-3}, 3, 99, grid);
  CHECK(again[1].mean == reports[1].mean);
}

TEST_CASE("grape result JSON serialization") {
  const auto problem = small_shift_problem();
  GrapeConfig cfg;
  cfg.max_iters = 3;
  const auto res = optimize(problem, random_controls(4, 2.0, 1), cfg);
  nlohmann::json j = res;
  CHECK(j.contains("controls"));
  CHECK(j.contains("cost_trajectory"));
  CHECK(j.contains("final_cost"));
  const auto back = j.at("controls").get<ControlMatrix>();
  CHECK((back.values - res.controls.values).cwiseAbs().maxCoeff() == 0.0);
}
