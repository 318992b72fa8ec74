#include "ladder/hamiltonian.hpp"

namespace ladder {

namespace {
constexpr int kDenseMaxQubits = 12;
constexpr double kAmpTol = 1e-12;

void check_amplitudes(const ControlColumn& u) {
  for (int ch = 0; ch < kNumChannels; ++ch)
    if (std::abs(u[ch]) > 1.0 + kAmpTol)
      throw std::invalid_argument("control amplitude outside [-1,1]");
}
}  // namespace

HamiltonianModel::HamiltonianModel(const LadderLayout& layout,
                                   const PhysicalParams& params,
                                   const DisorderRealization& disorder) {
  if (disorder.omega_offsets.size() != static_cast<std::size_t>(layout.num_qubits()) ||
      disorder.zeta_offsets.size() != static_cast<std::size_t>(layout.num_edges()))
    throw std::invalid_argument("disorder arrays do not match layout");
  params.validate();

  n_ = layout.num_qubits();
  if (n_ > 15) throw std::invalid_argument("resource guard: > 15 qubits");
  const Eigen::Index d = dim();
  rf_diag_.setZero(d);
  lab_diag_.setZero(d);

  for (const auto& q : layout.qubits) {
    const double dw = disorder.omega_offsets[q.index];
    const double w = params.omega_of(q.species) + q.freq_class * params.zeta_bar + dw;
    const std::uint64_t m = 1ULL << q.index;
    for (Eigen::Index b = 0; b < d; ++b) {
      const double s = (b & m) ? 1.0 : -1.0;
      rf_diag_[b] += 0.5 * dw * s;
      lab_diag_[b] += 0.5 * w * s;
    }
    const double coeff = (q.crossed ? 2.0 : 1.0) * 0.5 * params.rabi_of(q.species);
    drive_[static_cast<int>(q.species)].push_back({m, coeff});
  }

  for (int e = 0; e < layout.num_edges(); ++e) {
    const auto& edge = layout.edges[e];
    const double z = params.zeta_bar + disorder.zeta_offsets[e];
    const std::uint64_t m = (1ULL << edge.a) | (1ULL << edge.b);
    for (Eigen::Index b = 0; b < d; ++b) {
      if ((b & m) == m) rf_diag_[b] += 2.0 * z;
      const double sz = ((b >> edge.a) ^ (b >> edge.b)) & 1 ? -1.0 : 1.0;
      lab_diag_[b] += 0.5 * z * sz;
    }
  }

  diag_norm_bound_ = rf_diag_.cwiseAbs().maxCoeff();
}

MatrixXc HamiltonianModel::rwa_dense(const ControlColumn& u) const {
  check_amplitudes(u);
  if (n_ > kDenseMaxQubits)
    throw std::invalid_argument("dense Hamiltonian limited to 12 qubits");
  const Eigen::Index d = dim();
  MatrixXc H = MatrixXc::Zero(d, d);
  H.diagonal() = rf_diag_.cast<Complex>();
  for (int sp = 0; sp < 3; ++sp) {
    const double ux = u[2 * sp], uy = u[2 * sp + 1];
    if (ux == 0.0 && uy == 0.0) continue;
    for (const auto& t : drive_[sp]) {
      // <e|H|g> = c_x - i c_y on the driven qubit.
      const Complex amp(t.coeff * ux, -t.coeff * uy);
      for (Eigen::Index b = 0; b < d; ++b)
        if (b & t.mask) {
          H(b, b ^ t.mask) += amp;
          H(b ^ t.mask, b) += std::conj(amp);
        }
    }
  }
  return H;
}

void HamiltonianModel::apply_rwa(const ControlColumn& u, const VectorXc& x,
                                 VectorXc& y) const {
  check_amplitudes(u);
  y = rf_diag_.cast<Complex>().cwiseProduct(x);
  for (int sp = 0; sp < 3; ++sp) {
    const double ux = u[2 * sp], uy = u[2 * sp + 1];
    if (ux == 0.0 && uy == 0.0) continue;
    for (const auto& t : drive_[sp]) {
      const Complex up(t.coeff * ux, -t.coeff * uy);   // e <- g
      const Complex down = std::conj(up);              // g <- e
      const Eigen::Index d = dim();
      for (Eigen::Index b = 0; b < d; ++b)
        y[b] += ((b & t.mask) ? up : down) * x[b ^ t.mask];
    }
  }
}

MatrixXc HamiltonianModel::channel_dense(int ch) const {
  if (ch < 0 || ch >= kNumChannels) throw std::out_of_range("channel index");
  if (n_ > kDenseMaxQubits)
    throw std::invalid_argument("dense Hamiltonian limited to 12 qubits");
  const Eigen::Index d = dim();
  MatrixXc H = MatrixXc::Zero(d, d);
  const bool is_y = channel_is_y(ch);
  for (const auto& t : drive_[ch / 2]) {
    const Complex amp = is_y ? Complex(0, -t.coeff) : Complex(t.coeff, 0);
    for (Eigen::Index b = 0; b < d; ++b)
      if (b & t.mask) {
        H(b, b ^ t.mask) += amp;
        H(b ^ t.mask, b) += std::conj(amp);
      }
  }
  return H;
}

void HamiltonianModel::accumulate_channel(int ch, double a, const VectorXc& x,
                                          VectorXc& y) const {
  if (ch < 0 || ch >= kNumChannels) throw std::out_of_range("channel index");
  const bool is_y = channel_is_y(ch);
  const Eigen::Index d = dim();
  for (const auto& t : drive_[ch / 2]) {
    const Complex up = is_y ? Complex(0, -a * t.coeff) : Complex(a * t.coeff, 0);
    const Complex down = std::conj(up);
    for (Eigen::Index b = 0; b < d; ++b)
      y[b] += ((b & t.mask) ? up : down) * x[b ^ t.mask];
  }
}

MatrixXc HamiltonianModel::h0_lab_dense() const {
  if (n_ > kDenseMaxQubits)
    throw std::invalid_argument("dense Hamiltonian limited to 12 qubits");
  MatrixXc H = MatrixXc::Zero(dim(), dim());
  H.diagonal() = lab_diag_.cast<Complex>();
  return H;
}

double HamiltonianModel::norm_bound(const ControlColumn& u) const {
  double b = diag_norm_bound_;
  for (int sp = 0; sp < 3; ++sp) {
    const double mag = std::hypot(u[2 * sp], u[2 * sp + 1]);
    for (const auto& t : drive_[sp]) b += mag * t.coeff;
  }
  return b;
}

MatrixXc build_h0_lab(const LadderLayout& layout, const PhysicalParams& params,
                      const DisorderRealization& disorder) {
  return HamiltonianModel(layout, params, disorder).h0_lab_dense();
}

MatrixXc build_rwa_hamiltonian(const LadderLayout& layout,
                               const PhysicalParams& params,
                               const DisorderRealization& disorder,
                               const ControlColumn& amplitudes) {
  return HamiltonianModel(layout, params, disorder).rwa_dense(amplitudes);
}

}  // namespace ladder
