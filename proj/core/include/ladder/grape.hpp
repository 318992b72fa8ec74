#pragma once

// Gradient-ascent pulse engineering over the 6xM control matrix. Exact
// per-slot gradients via the eigendecomposition (Daleckii-Krein) Frechet
// derivative of each slot exponential, chained through forward/backward
// propagator products; Adam updates with elementwise clamping to the
// amplitude bound. Two cost modes: unitary trace matching
// E = 1 - |Tr(X_target^dag X)|/d and state-set averaged fidelity 1 - Fbar.

#include <cstdint>
#include <vector>

#include "ladder/fidelity.hpp"

namespace ladder {

enum class CostMode { Unitary, StateSet };

struct GrapeConfig {
  CostMode cost_mode = CostMode::StateSet;
  int max_iters = 1000;
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_adam = 1e-8;
  double amplitude_bound = 1.0;
  std::uint64_t init_seed = 0;
  double init_jitter = 0.0;    // std of Gaussian jitter on the warm start
  double cost_tolerance = 1e-6;
  int divergence_window = 50;  // consecutive above-start iterations -> abort
  int log_every = 0;           // 0 = silent
};

struct GrapeProblem {
  LadderLayout layout;
  PhysicalParams params;
  DisorderRealization disorder;
  // Unitary mode target:
  MatrixXc target_unitary;
  // State-set mode training pairs:
  std::vector<VectorXc> initial_states;
  std::vector<VectorXc> target_states;
};

// Default training grid of App-style state-set optimization.
inline const std::vector<double> kTrainingP = {0.0, 0.33, 0.66};

// Assembles both target representations (ideal blockade algebra) for the
// given protocol.
GrapeProblem make_protocol_problem(const LadderLayout& layout,
                                   const ProtocolSpec& protocol,
                                   const PhysicalParams& params,
                                   const DisorderRealization& disorder,
                                   const std::vector<double>& training_p =
                                       kTrainingP,
                                   double phi = 0.0);

// Discretized naive schedule plus optional N(0, jitter) perturbation,
// clamped to [-1, 1].
ControlMatrix warm_start_controls(const LadderLayout& layout,
                                  const ProtocolSpec& protocol,
                                  const PhysicalParams& params, double slot,
                                  double jitter = 0.0,
                                  std::uint64_t seed = 0);

using GradientMatrix = Eigen::Matrix<double, kNumChannels, Eigen::Dynamic>;

// Exact dE/du_jk; cost_out (if given) receives the cost at `controls`.
GradientMatrix grape_gradient(const GrapeProblem& problem,
                              const ControlMatrix& controls, CostMode mode,
                              double* cost_out = nullptr);

struct GrapeResult {
  ControlMatrix controls;  // best-cost iterate
  std::vector<double> cost_trajectory;
  double final_cost = 1.0;
  int iterations = 0;
  double wall_seconds = 0.0;
  bool monotonic_after_warmup = true;  // soft flag, never a failure
  bool diverged = false;
};

GrapeResult optimize(const GrapeProblem& problem,
                     const ControlMatrix& initial_controls,
                     const GrapeConfig& config);

// Same pipeline with the slot count scaled by time_scale in (0,1]; the
// initial controls are time-compressed onto the shorter grid.
GrapeResult optimize_reduced_time(const GrapeProblem& problem,
                                  const ControlMatrix& initial_controls,
                                  const GrapeConfig& config,
                                  double time_scale);

// Re-evaluates frozen optimized controls under perturbed disorder: for each
// spread, n_samples perturbations of the base realization. Report entries
// are per-sample averaged fidelities over p_grid (entry.p stores the
// spread; report.epsilon likewise).
std::vector<FidelityReport> resilience_sweep(
    const LadderLayout& layout, const PhysicalParams& params,
    const ProtocolSpec& protocol, const DisorderRealization& base_disorder,
    const ControlMatrix& controls, const std::vector<double>& spreads,
    int n_samples, std::uint64_t seed, const std::vector<double>& p_grid,
    double phi = 0.0);

void to_json(nlohmann::json& j, const GrapeResult& r);

}  // namespace ladder
