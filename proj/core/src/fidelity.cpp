#include "ladder/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace ladder {

namespace {

const QubitSpec* column_qubit(const LadderLayout& layout, int column) {
  for (const auto& q : layout.qubits)
    if (!q.coupler && q.column == column) return &q;
  return nullptr;
}

struct Rot2 {
  Complex ee, eg, ge, gg;
};

Rot2 rotation_elements(double theta, Eigen::Vector3d n) {
  const double len = n.norm();
  if (len < 1e-12) throw std::invalid_argument("zero rotation axis");
  n /= len;
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  // R = cos(t/2) 1 - i sin(t/2) n.sigma in the (|e>,|g>) ordering.
  return {Complex(c, -s * n.z()), Complex(-s * n.y(), -s * n.x()),
          Complex(s * n.y(), -s * n.x()), Complex(c, s * n.z())};
}

}  // namespace

Species icc_column_species(const LadderLayout& layout, int icc_position) {
  const QubitSpec* q = column_qubit(layout, icc_position);
  if (!q) throw std::out_of_range("invalid ICC column");
  return q->species;
}

VectorXc make_icc_state(const LadderLayout& layout, const ICCState& spec) {
  if (!column_qubit(layout, spec.icc_position))
    throw std::out_of_range("invalid ICC column");
  if (spec.p < 0 || spec.p > 1)
    throw std::invalid_argument("p outside [0,1]");
  const int n = layout.num_qubits();
  std::vector<Complex> ag(n), ae(n);
  for (const auto& q : layout.qubits) {
    if (q.coupler || q.column > spec.icc_position) {
      ag[q.index] = 1;
      ae[q.index] = 0;
    } else if (q.column == spec.icc_position) {
      ag[q.index] = std::sqrt(1 - spec.p);
      ae[q.index] = std::sqrt(spec.p) *
                    std::exp(Complex(0, spec.phi));
    } else {
      // Neel domain: even distance from the ICC column is excited.
      const bool excited = (spec.icc_position - q.column) % 2 == 0;
      ag[q.index] = excited ? 0 : 1;
      ae[q.index] = excited ? 1 : 0;
    }
  }
  const Eigen::Index d = Eigen::Index(1) << n;
  VectorXc psi(d);
  for (Eigen::Index b = 0; b < d; ++b) {
    Complex amp = 1;
    for (int q = 0; q < n && amp != Complex(0); ++q)
      amp *= (b >> q) & 1 ? ae[q] : ag[q];
    psi[b] = amp;
  }
  return psi;
}

void apply_ideal_rotation(const LadderLayout& layout, const IdealRotation& r,
                          VectorXc& psi) {
  const auto adj = layout.adjacency();
  const Eigen::Index d = psi.size();
  for (const auto& q : layout.qubits) {
    if (q.species != r.species) continue;
    const Rot2 R = q.crossed
                       ? rotation_elements(r.theta_crossed, r.axis_crossed)
                       : rotation_elements(r.theta_regular, r.axis_regular);
    const std::uint64_t mi = 1ULL << q.index;
    std::uint64_t nbr = 0;
    for (int j : adj[q.index]) nbr |= 1ULL << j;
    // Rotate only where every neighbor is |g> (all neighbor bits clear).
    for (Eigen::Index b = 0; b < d; ++b) {
      if (b & (nbr | mi)) continue;
      const Complex g = psi[b], e = psi[b | mi];
      psi[b | mi] = R.ee * e + R.eg * g;
      psi[b] = R.ge * e + R.gg * g;
    }
  }
}

MatrixXc ideal_blockade_unitary(const LadderLayout& layout,
                                const IdealRotation& r) {
  if (layout.num_qubits() > 12)
    throw std::invalid_argument("dense ideal unitary limited to 12 qubits");
  const Eigen::Index d = Eigen::Index(1) << layout.num_qubits();
  MatrixXc U = MatrixXc::Identity(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    VectorXc psi = U.col(col);
    apply_ideal_rotation(layout, r, psi);
    U.col(col) = psi;
  }
  return U;
}

namespace {

IdealRotation segment_rotation(const PhysicalParams& params,
                               const PulseSegment& s) {
  IdealRotation r;
  r.species = s.species;
  r.theta_regular = s.amplitude * params.rabi_of(s.species) * s.duration;
  r.theta_crossed = 2 * r.theta_regular;
  r.axis_regular = {std::cos(s.phase), std::sin(s.phase), 0};
  r.axis_crossed = r.axis_regular;
  return r;
}

}  // namespace

void apply_ideal_schedule(const LadderLayout& layout,
                          const PhysicalParams& params,
                          const PulseSchedule& schedule, VectorXc& psi) {
  schedule.validate();
  // Segments within a window act on disjoint supports (same-species qubits
  // are never adjacent), so simultaneous action equals the product.
  for (const auto& w : schedule.windows)
    for (const auto& s : w.segments)
      apply_ideal_rotation(layout, segment_rotation(params, s), psi);
}

MatrixXc ideal_blockade_unitary(const LadderLayout& layout,
                                const PhysicalParams& params,
                                const PulseSchedule& schedule) {
  if (layout.num_qubits() > 12)
    throw std::invalid_argument("dense ideal unitary limited to 12 qubits");
  const Eigen::Index d = Eigen::Index(1) << layout.num_qubits();
  MatrixXc U = MatrixXc::Identity(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    VectorXc psi = U.col(col);
    apply_ideal_schedule(layout, params, schedule, psi);
    U.col(col) = psi;
  }
  return U;
}

std::string protocol_id(const ProtocolSpec& p) {
  switch (p.kind) {
    case ProtocolKind::Identity: return "identity";
    case ProtocolKind::Shift:
      return "shift^" + std::to_string(p.repeat) + "@" +
             std::to_string(p.icc_position);
    case ProtocolKind::Hadamard:
      return std::string("hadamard_") + to_char(p.hadamard_target) + "@" +
             std::to_string(p.icc_position);
    case ProtocolKind::Cz: return "cz";
  }
  return "?";
}

ProtocolKind protocol_kind_from_string(const std::string& s) {
  if (s == "identity") return ProtocolKind::Identity;
  if (s == "shift") return ProtocolKind::Shift;
  if (s == "hadamard") return ProtocolKind::Hadamard;
  if (s == "cz") return ProtocolKind::Cz;
  throw std::invalid_argument("unknown protocol kind: " + s);
}

PulseSchedule naive_schedule(const LadderLayout& layout,
                             const ProtocolSpec& protocol,
                             const PhysicalParams& params) {
  PulseSchedule s;
  switch (protocol.kind) {
    case ProtocolKind::Identity:
      break;
    case ProtocolKind::Shift: {
      if (protocol.repeat < 1)
        throw std::invalid_argument("shift repeat must be >= 1");
      int pos = protocol.icc_position;
      for (int k = 0; k < protocol.repeat; ++k) {
        const Species sp = icc_column_species(layout, pos);
        PulseSchedule step = shift_sequence(params, ShiftDirection::Right, sp);
        for (auto& w : step.windows) s.windows.push_back(std::move(w));
        ++pos;
      }
      icc_column_species(layout, pos);  // target column must exist
      break;
    }
    case ProtocolKind::Hadamard: {
      const QubitSpec* q = column_qubit(layout, protocol.icc_position);
      bool ok = false;
      for (const auto& qq : layout.qubits)
        if (!qq.coupler && qq.column == protocol.icc_position && qq.crossed &&
            qq.species == protocol.hadamard_target)
          ok = true;
      if (!q || !ok)
        throw std::invalid_argument(
            "hadamard needs a crossed target qubit at the ICC column");
      s = hadamard_sequence(params, protocol.hadamard_target);
      break;
    }
    case ProtocolKind::Cz: {
      bool ok = false;
      for (const auto& qq : layout.qubits)
        if (qq.coupler && qq.crossed && qq.species == Species::A) ok = true;
      if (!ok)
        throw std::invalid_argument("cz needs a crossed A-type coupler");
      s = cz_sequence(params);
      break;
    }
  }
  s.validate();
  return s;
}

VectorXc ideal_target_state(const LadderLayout& layout,
                            const ProtocolSpec& protocol,
                            const PhysicalParams& params,
                            const ICCState& initial) {
  VectorXc psi = make_icc_state(layout, initial);
  apply_ideal_schedule(layout, params, naive_schedule(layout, protocol, params),
                       psi);
  return psi;
}

double state_fidelity(const VectorXc& target, const VectorXc& actual) {
  if (target.size() != actual.size())
    throw std::invalid_argument("state dimension mismatch");
  if (std::abs(target.norm() - 1) > 1e-8 || std::abs(actual.norm() - 1) > 1e-8)
    throw std::invalid_argument("states must be normalized");
  return std::min(std::abs(target.dot(actual)), 1.0);
}

double trace_cost(const MatrixXc& X, const MatrixXc& X_target) {
  if (X.rows() != X_target.rows() || X.cols() != X_target.cols())
    throw std::invalid_argument("operator dimension mismatch");
  const double d = static_cast<double>(X.rows());
  const double c = 1.0 - std::abs((X_target.adjoint() * X).trace()) / d;
  return std::clamp(c, 0.0, 1.0);
}

void FidelityReport::finalize() {
  n_samples = static_cast<int>(entries.size());
  if (n_samples == 0) {
    mean = std_dev = std_err = 0;
    return;
  }
  double m = 0;
  for (const auto& e : entries) m += e.fidelity;
  mean = m / n_samples;
  double v = 0;
  for (const auto& e : entries) v += (e.fidelity - mean) * (e.fidelity - mean);
  std_dev = n_samples > 1 ? std::sqrt(v / (n_samples - 1)) : 0;
  std_err = std_dev / std::sqrt(static_cast<double>(n_samples));
}

std::vector<double> default_p_grid(int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = double(i) / (points - 1);
  return g;
}

namespace {

template <typename Controls>
FidelityReport averaged_fidelity_impl(const ProtocolSpec& protocol,
                                      const LadderLayout& layout,
                                      const PhysicalParams& params,
                                      const DisorderRealization& disorder,
                                      const Controls& controls,
                                      const std::vector<double>& p_grid,
                                      double phi) {
  if (p_grid.empty()) throw std::invalid_argument("empty p grid");
  HamiltonianModel model(layout, params, disorder);
  const MatrixXc X = evolve_unitary(model, controls);
  FidelityReport rep;
  rep.epsilon = disorder.epsilon;
  rep.seed = disorder.seed;
  rep.protocol = protocol_id(protocol);
  for (double p : p_grid) {
    ICCState init{p, phi, protocol.icc_position};
    const VectorXc psi0 = make_icc_state(layout, init);
    const VectorXc target = ideal_target_state(layout, protocol, params, init);
    VectorXc final_state = X * psi0;
    final_state /= final_state.norm();
    rep.entries.push_back({p, phi, state_fidelity(target, final_state)});
  }
  rep.finalize();
  return rep;
}

template <typename Controls>
FidelityReport ensemble_fidelity_impl(const ProtocolSpec& protocol,
                                      const LadderLayout& layout,
                                      const PhysicalParams& params,
                                      double epsilon, DisorderMode mode,
                                      int n_samples, std::uint64_t seed,
                                      const Controls& controls,
                                      const std::vector<double>& p_grid,
                                      double phi) {
  if (p_grid.empty()) throw std::invalid_argument("empty p grid");
  if (n_samples < 1)
    throw std::invalid_argument("ensemble fidelity needs n_samples >= 1");
  const int P = static_cast<int>(p_grid.size());
  std::vector<VectorXc> inits(P), targets(P);
  for (int i = 0; i < P; ++i) {
    ICCState init{p_grid[i], phi, protocol.icc_position};
    inits[i] = make_icc_state(layout, init);
    targets[i] = ideal_target_state(layout, protocol, params, init);
  }
  // complex overlap per (p, sample); the final states are unitary images of
  // normalized initials, so no renormalization is needed
  MatrixXc overlaps(P, n_samples);
  for (int s = 0; s < n_samples; ++s) {
    const auto d =
        sample_disorder(layout, params, epsilon, derive_seed(seed, s), mode);
    HamiltonianModel model(layout, params, d);
    const MatrixXc X = evolve_unitary(model, controls);
    for (int i = 0; i < P; ++i)
      overlaps(i, s) = targets[i].dot(X * inits[i]);
  }
  FidelityReport rep;
  rep.epsilon = epsilon;
  rep.seed = seed;
  rep.protocol = protocol_id(protocol);
  const VectorXc row_sums = overlaps.rowwise().sum();
  for (int i = 0; i < P; ++i)
    rep.entries.push_back(
        {p_grid[i], phi,
         std::min(std::abs(row_sums(i)) / n_samples, 1.0)});
  rep.finalize();
  // entries run over p, not samples: report the sample count and replace the
  // across-p spread with a delete-one jackknife over disorder samples
  rep.n_samples = n_samples;
  if (n_samples > 1) {
    Eigen::VectorXd loo(n_samples);
    for (int j = 0; j < n_samples; ++j) {
      double m = 0;
      for (int i = 0; i < P; ++i)
        m += std::abs(row_sums(i) - overlaps(i, j)) / (n_samples - 1);
      loo(j) = m / P;
    }
    const double loo_mean = loo.mean();
    rep.std_err = std::sqrt((n_samples - 1.0) / n_samples *
                            (loo.array() - loo_mean).square().sum());
    rep.std_dev = rep.std_err * std::sqrt(static_cast<double>(n_samples));
  } else {
    rep.std_dev = rep.std_err = 0;
  }
  return rep;
}

}  // namespace

FidelityReport ensemble_fidelity(const ProtocolSpec& protocol,
                                 const LadderLayout& layout,
                                 const PhysicalParams& params, double epsilon,
                                 DisorderMode mode, int n_samples,
                                 std::uint64_t seed,
                                 const ControlMatrix& controls,
                                 const std::vector<double>& p_grid,
                                 double phi) {
  return ensemble_fidelity_impl(protocol, layout, params, epsilon, mode,
                                n_samples, seed, controls, p_grid, phi);
}

FidelityReport ensemble_fidelity(const ProtocolSpec& protocol,
                                 const LadderLayout& layout,
                                 const PhysicalParams& params, double epsilon,
                                 DisorderMode mode, int n_samples,
                                 std::uint64_t seed,
                                 const PulseSchedule& schedule,
                                 const std::vector<double>& p_grid,
                                 double phi) {
  return ensemble_fidelity_impl(protocol, layout, params, epsilon, mode,
                                n_samples, seed, schedule, p_grid, phi);
}

FidelityReport averaged_fidelity(const ProtocolSpec& protocol,
                                 const LadderLayout& layout,
                                 const PhysicalParams& params,
                                 const DisorderRealization& disorder,
                                 const ControlMatrix& controls,
                                 const std::vector<double>& p_grid,
                                 double phi) {
  return averaged_fidelity_impl(protocol, layout, params, disorder, controls,
                                p_grid, phi);
}

FidelityReport averaged_fidelity(const ProtocolSpec& protocol,
                                 const LadderLayout& layout,
                                 const PhysicalParams& params,
                                 const DisorderRealization& disorder,
                                 const PulseSchedule& schedule,
                                 const std::vector<double>& p_grid,
                                 double phi) {
  return averaged_fidelity_impl(protocol, layout, params, disorder, schedule,
                                p_grid, phi);
}

void write_csv_header(std::ostream& os) {
  os << "epsilon,p,phi,fidelity,stderr,n_samples,protocol,seed\n";
}

void write_csv_rows(std::ostream& os, const FidelityReport& report) {
  for (const auto& e : report.entries)
    os << report.epsilon << ',' << e.p << ',' << e.phi << ',' << e.fidelity
       << ',' << report.std_err << ',' << report.n_samples << ','
       << report.protocol << ',' << report.seed << '\n';
}

}  // namespace ladder
