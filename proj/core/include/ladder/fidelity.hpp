#pragma once

// Ideal blockade-limit gate algebra (the abstract model the pulses realize),
// ICC initial/target states, naive protocol schedules, and fidelity metrics.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ladder/propagate.hpp"

namespace ladder {

// The information-carrying column: the boundary between the Neel domain
// (left) and the ferromagnetic |gg...g> domain (right). Row qubits at even
// graph distance left of the ICC are |e>, odd are |g>; inter-row couplers
// stay |g>; each row's ICC qubit carries sqrt(1-p)|g> + sqrt(p) e^{i phi}|e>.
struct ICCState {
  double p = 0.0;
  double phi = 0.0;
  int icc_position = 0;  // column index
};

Species icc_column_species(const LadderLayout& layout, int icc_position);

VectorXc make_icc_state(const LadderLayout& layout, const ICCState& spec);

// One factor of the blockade-limit controlled-unitary algebra: every qubit
// of `species` is rotated by R(theta, axis) = cos(theta/2) 1 -
// i sin(theta/2) axis.sigma on the subspace where all of its graph
// neighbors are |g>, and left alone otherwise. Crossed qubits rotate by the
// crossed angle/axis (2*theta for primitive pulses).
struct IdealRotation {
  Species species = Species::A;
  double theta_regular = 0.0;
  double theta_crossed = 0.0;
  Eigen::Vector3d axis_regular = {1, 0, 0};
  Eigen::Vector3d axis_crossed = {1, 0, 0};
};

void apply_ideal_rotation(const LadderLayout& layout, const IdealRotation& r,
                          VectorXc& psi);
MatrixXc ideal_blockade_unitary(const LadderLayout& layout,
                                const IdealRotation& r);

// Ideal action of a whole pulse schedule: each segment maps to an
// IdealRotation with theta = amplitude * Omega_chi * duration and in-plane
// axis (cos phi, sin phi, 0).
MatrixXc ideal_blockade_unitary(const LadderLayout& layout,
                                const PhysicalParams& params,
                                const PulseSchedule& schedule);
void apply_ideal_schedule(const LadderLayout& layout,
                          const PhysicalParams& params,
                          const PulseSchedule& schedule, VectorXc& psi);

enum class ProtocolKind { Identity, Shift, Hadamard, Cz };

struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::Shift;
  int repeat = 1;                       // shift count k
  Species hadamard_target = Species::B;
  int icc_position = 0;                 // ICC column the protocol starts at
};

std::string protocol_id(const ProtocolSpec& p);
ProtocolKind protocol_kind_from_string(const std::string& s);

// The paper's analytic pulse tables for the protocol, shift window order
// chosen per the current ICC column species.
PulseSchedule naive_schedule(const LadderLayout& layout,
                             const ProtocolSpec& protocol,
                             const PhysicalParams& params);

// Disorder-free blockade-algebra target state ("the ideal target"), never a
// simulated RWA state.
VectorXc ideal_target_state(const LadderLayout& layout,
                            const ProtocolSpec& protocol,
                            const PhysicalParams& params,
                            const ICCState& initial);

// |<target|actual>|; global-phase invariant. Throws on unnormalized input.
double state_fidelity(const VectorXc& target, const VectorXc& actual);

// 1 - |Tr(X_target^dag X)| / d.
double trace_cost(const MatrixXc& X, const MatrixXc& X_target);

struct FidelityEntry {
  double p = 0;
  double phi = 0;
  double fidelity = 0;
};

struct FidelityReport {
  std::vector<FidelityEntry> entries;
  double mean = 0;
  double std_dev = 0;
  double std_err = 0;
  int n_samples = 0;
  // metadata
  double epsilon = 0;
  std::uint64_t seed = 0;
  std::string protocol;

  void finalize();  // recompute mean/std/stderr from entries
};

// Default report grid: 11 uniform p in [0,1].
std::vector<double> default_p_grid(int points = 11);

// Evolves |psi(p,phi)> under the RWA dynamics for each p and compares with
// the ideal target.
FidelityReport averaged_fidelity(const ProtocolSpec& protocol,
                                 const LadderLayout& layout,
                                 const PhysicalParams& params,
                                 const DisorderRealization& disorder,
                                 const ControlMatrix& controls,
                                 const std::vector<double>& p_grid,
                                 double phi = 0.0);
FidelityReport averaged_fidelity(const ProtocolSpec& protocol,
                                 const LadderLayout& layout,
                                 const PhysicalParams& params,
                                 const DisorderRealization& disorder,
                                 const PulseSchedule& schedule,
                                 const std::vector<double>& p_grid,
                                 double phi = 0.0);

// Fidelity of the sample-averaged final state: for each p the complex
// overlaps <target|U_s|psi(p,phi)> are averaged over n_samples disorder
// realizations (seeds derive_seed(seed, s)) before taking the magnitude, so
// realization-to-realization phase scatter suppresses the result the way
// decoherence would in the corresponding mixed ensemble. mean is the average
// of the per-p entries; std_err is a delete-one jackknife over samples.
FidelityReport ensemble_fidelity(const ProtocolSpec& protocol,
                                 const LadderLayout& layout,
                                 const PhysicalParams& params, double epsilon,
                                 DisorderMode mode, int n_samples,
                                 std::uint64_t seed,
                                 const ControlMatrix& controls,
                                 const std::vector<double>& p_grid,
                                 double phi = 0.0);
FidelityReport ensemble_fidelity(const ProtocolSpec& protocol,
                                 const LadderLayout& layout,
                                 const PhysicalParams& params, double epsilon,
                                 DisorderMode mode, int n_samples,
                                 std::uint64_t seed,
                                 const PulseSchedule& schedule,
                                 const std::vector<double>& p_grid,
                                 double phi = 0.0);

// CSV columns: epsilon,p,phi,fidelity,stderr,n_samples,protocol,seed
void write_csv_header(std::ostream& os);
void write_csv_rows(std::ostream& os, const FidelityReport& report);

}  // namespace ladder
