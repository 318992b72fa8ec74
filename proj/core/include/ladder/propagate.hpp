#pragma once

// Exact piecewise-constant time evolution under the RF+RWA Hamiltonian.
// Per-slot propagators use eigendecomposition (dense path, <= 12 qubits);
// state-only evolution above that uses a shifted Lanczos/Krylov expmv so the
// 15-qubit ladder never materializes a dense operator.

#include "ladder/hamiltonian.hpp"
#include "ladder/pulses.hpp"

namespace ladder {

// exp(-i H dt); throws on non-Hermitian input (tolerance 1e-12).
MatrixXc slot_propagator(const MatrixXc& H, double dt);

// Product propagator over all slots/windows, later slots applied on the
// left. Dense path only; propagators for repeated control columns are
// cached.
MatrixXc evolve_unitary(const HamiltonianModel& model,
                        const ControlMatrix& controls);
MatrixXc evolve_unitary(const HamiltonianModel& model,
                        const PulseSchedule& schedule);

// State evolution; uses the dense cache at <= 12 qubits and matrix-free
// Krylov above. norm_drift (if given) receives max |  ||psi|| - 1 | seen.
VectorXc evolve_state(const HamiltonianModel& model,
                      const ControlMatrix& controls, const VectorXc& psi0,
                      double* norm_drift = nullptr);
VectorXc evolve_state(const HamiltonianModel& model,
                      const PulseSchedule& schedule, const VectorXc& psi0,
                      double* norm_drift = nullptr);

// Contract-level wrappers.
MatrixXc evolve_unitary(const LadderLayout& layout,
                        const PhysicalParams& params,
                        const DisorderRealization& disorder,
                        const ControlMatrix& controls);
VectorXc evolve_state(const VectorXc& psi0, const LadderLayout& layout,
                      const PhysicalParams& params,
                      const DisorderRealization& disorder,
                      const ControlMatrix& controls);

}  // namespace ladder
