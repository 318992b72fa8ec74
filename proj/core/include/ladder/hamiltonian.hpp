#pragma once

// Static and drive operators in the lab frame and in the rotating frame with
// RWA. Basis conventions: basis index bit q corresponds to qubit q, a set bit
// means |e>, and sigma_z|e> = +|e>. hbar = 1 throughout.
//
// Rotating-frame Hamiltonian (6 global control channels, X/Y per species):
//   H_rf = sum_i (dw_i/2) sz_i + sum_<ij> 2 zeta_ij |ee><ee|
//        + sum_chi sum_{i in chi} m_i (Omega_chi/2)(u_x sx_i + u_y sy_i)
// with m_i = 2 for crossed qubits, 1 otherwise. Drives sit at the nominal
// (disorder-free) frequencies, so only the disorder offsets dw_i survive as
// sigma_z detunings.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ladder/disorder.hpp"
#include "ladder/lattice.hpp"
#include "ladder/params.hpp"

namespace ladder {

using Complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

// One column of the 6xM control matrix; row order (A,x),(A,y),(B,x),(B,y),
// (C,x),(C,y).
using ControlColumn = Eigen::Matrix<double, 6, 1>;

constexpr int kNumChannels = 6;

inline int channel_index(Species s, bool y_quadrature) {
  return 2 * static_cast<int>(s) + (y_quadrature ? 1 : 0);
}
inline Species channel_species(int ch) { return static_cast<Species>(ch / 2); }
inline bool channel_is_y(int ch) { return ch % 2 != 0; }

// Precomputed operator structure for one (layout, params, disorder) triple.
// All methods are const and thread-safe after construction.
class HamiltonianModel {
 public:
  HamiltonianModel(const LadderLayout& layout, const PhysicalParams& params,
                   const DisorderRealization& disorder);

  int num_qubits() const { return n_; }
  Eigen::Index dim() const { return Eigen::Index(1) << n_; }

  // Diagonal of the undriven rotating-frame Hamiltonian (detunings plus
  // blockade shifts), length 2^n.
  const Eigen::VectorXd& rf_diagonal() const { return rf_diag_; }

  // Dense H_rf for one control column. Throws if any |u| > 1 or if the
  // dimension exceeds the dense limit (2^12).
  MatrixXc rwa_dense(const ControlColumn& u) const;

  // Matrix-free y = H_rf(u) x for large state vectors.
  void apply_rwa(const ControlColumn& u, const VectorXc& x, VectorXc& y) const;

  // Drive operator of one channel at unit amplitude (Omega and crossed
  // multipliers included): H_ch = sum_{i in chi} m_i (Omega_chi/2) s_{x|y},i.
  MatrixXc channel_dense(int ch) const;
  // y += a * H_ch x (matrix-free; x and y must be distinct).
  void accumulate_channel(int ch, double a, const VectorXc& x,
                          VectorXc& y) const;

  // Dense lab-frame H0 (diagonal in this basis).
  MatrixXc h0_lab_dense() const;
  const Eigen::VectorXd& lab_diagonal() const { return lab_diag_; }

  // Upper bound on ||H_rf(u)||_2, used for Krylov step control.
  double norm_bound(const ControlColumn& u) const;

 private:
  struct DriveTerm {
    std::uint64_t mask;  // bit of the driven qubit
    double coeff;        // m_i * Omega_chi / 2
  };

  int n_ = 0;
  Eigen::VectorXd rf_diag_;
  Eigen::VectorXd lab_diag_;
  std::vector<DriveTerm> drive_[kNumChannels / 2];  // per species
  double diag_norm_bound_ = 0.0;
};

// Contract-level free functions.
MatrixXc build_h0_lab(const LadderLayout& layout, const PhysicalParams& params,
                      const DisorderRealization& disorder);
MatrixXc build_rwa_hamiltonian(const LadderLayout& layout,
                               const PhysicalParams& params,
                               const DisorderRealization& disorder,
                               const ControlColumn& amplitudes);

}  // namespace ladder
