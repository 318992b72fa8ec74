#include "ladder/propagate.hpp"

#include <array>
#include <cmath>
#include <map>

namespace ladder {

namespace {

constexpr int kDenseMaxQubits = 12;

MatrixXc expm_herm(const MatrixXc& H, double dt) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(H);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigensolver failed in slot_propagator");
  const auto& lam = es.eigenvalues();
  VectorXc phases(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    phases[i] = std::exp(Complex(0, -lam[i] * dt));
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint();
}

// Cache of per-(control column, duration) propagators; naive schedules reuse
// a handful of distinct columns over thousands of slots.
struct PropagatorCache {
  const HamiltonianModel& model;
  std::map<std::array<double, 7>, MatrixXc> cache;

  const MatrixXc& get(const ControlColumn& u, double dt) {
    std::array<double, 7> key;
    for (int i = 0; i < 6; ++i) key[i] = u[i];
    key[6] = dt;
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, expm_herm(model.rwa_dense(u), dt)).first;
    return it->second;
  }
};

// Lanczos approximation of exp(-i H dt) psi for Hermitian H, applied
// matrix-free. The diagonal mean is shifted out first (pure global phase)
// to shrink the spectral interval the Krylov space must cover.
class KrylovStepper {
 public:
  KrylovStepper(const HamiltonianModel& model, const ControlColumn& u)
      : model_(model), u_(u), shift_(model.rf_diagonal().mean()) {}

  void step(VectorXc& psi, double dt) const {
    double remaining = dt;
    // Conservative sub-step so a 30-dim Krylov space converges well.
    const double bound = model_.norm_bound(u_) + std::abs(shift_) + 1e-12;
    const double max_sub = 8.0 / bound;
    while (remaining > 1e-15) {
      const double h = std::min(remaining, max_sub);
      substep(psi, h);
      remaining -= h;
    }
    psi *= std::exp(Complex(0, -shift_ * dt));
  }

 private:
  void apply(const VectorXc& x, VectorXc& y) const {
    model_.apply_rwa(u_, x, y);
    y -= shift_ * x;
  }

  void substep(VectorXc& psi, double dt) const {
    constexpr int kMaxM = 30;
    constexpr double kTol = 1e-12;
    const Eigen::Index d = psi.size();
    const double beta0 = psi.norm();
    if (beta0 == 0) return;

    Eigen::MatrixXcd V(d, kMaxM + 1);
    Eigen::VectorXd alpha(kMaxM), beta(kMaxM);
    V.col(0) = psi / beta0;
    VectorXc w(d);
    int m = 0;
    for (; m < kMaxM; ++m) {
      apply(V.col(m), w);
      if (m > 0) w -= beta[m - 1] * V.col(m - 1);
      alpha[m] = std::real(V.col(m).dot(w));
      w -= alpha[m] * V.col(m);
      // One pass of reorthogonalization for long-time stability.
      for (int j = 0; j <= m; ++j) w -= V.col(j).dot(w) * V.col(j);
      beta[m] = w.norm();
      if (beta[m] < kTol) {  // happy breakdown: exact in this subspace
        ++m;
        break;
      }
      V.col(m + 1) = w / beta[m];
    }

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    VectorXc small = VectorXc::Zero(m);
    for (int i = 0; i < m; ++i) {
      Complex acc = 0;
      for (int k = 0; k < m; ++k)
        acc += es.eigenvectors()(i, k) *
               std::exp(Complex(0, -es.eigenvalues()[k] * dt)) *
               es.eigenvectors()(0, k);
      small[i] = acc;
    }
    psi = beta0 * (V.leftCols(m) * small);
  }

  const HamiltonianModel& model_;
  ControlColumn u_;
  double shift_;
};

void check_state(const VectorXc& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("state vector not normalized");
}

template <typename WindowFn>
VectorXc evolve_state_impl(const HamiltonianModel& model, const VectorXc& psi0,
                           double* norm_drift, WindowFn&& for_each_window) {
  check_state(psi0);
  VectorXc psi = psi0;
  double drift = 0;
  if (model.num_qubits() <= kDenseMaxQubits) {
    PropagatorCache cache{model};
    for_each_window([&](const ControlColumn& u, double dt) {
      psi = cache.get(u, dt) * psi;
      drift = std::max(drift, std::abs(psi.norm() - 1.0));
    });
  } else {
    for_each_window([&](const ControlColumn& u, double dt) {
      KrylovStepper(model, u).step(psi, dt);
      drift = std::max(drift, std::abs(psi.norm() - 1.0));
    });
    psi /= psi.norm();
  }
  if (norm_drift) *norm_drift = drift;
  return psi;
}

}  // namespace

MatrixXc slot_propagator(const MatrixXc& H, double dt) {
  if (dt <= 0) throw std::invalid_argument("dt must be positive");
  if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("slot Hamiltonian not Hermitian");
  return expm_herm(H, dt);
}

MatrixXc evolve_unitary(const HamiltonianModel& model,
                        const ControlMatrix& controls) {
  controls.validate();
  if (model.num_qubits() > kDenseMaxQubits)
    throw std::invalid_argument(
        "resource guard: dense unitary evolution limited to 12 qubits");
  PropagatorCache cache{model};
  MatrixXc X = MatrixXc::Identity(model.dim(), model.dim());
  for (int k = 0; k < controls.slots(); ++k)
    X = cache.get(controls.values.col(k), controls.slot) * X;
  return X;
}

MatrixXc evolve_unitary(const HamiltonianModel& model,
                        const PulseSchedule& schedule) {
  schedule.validate();
  if (model.num_qubits() > kDenseMaxQubits)
    throw std::invalid_argument(
        "resource guard: dense unitary evolution limited to 12 qubits");
  PropagatorCache cache{model};
  MatrixXc X = MatrixXc::Identity(model.dim(), model.dim());
  for (const auto& w : schedule.windows)
    X = cache.get(PulseSchedule::window_column(w), w.duration) * X;
  return X;
}

VectorXc evolve_state(const HamiltonianModel& model,
                      const ControlMatrix& controls, const VectorXc& psi0,
                      double* norm_drift) {
  controls.validate();
  return evolve_state_impl(model, psi0, norm_drift, [&](auto&& step) {
    for (int k = 0; k < controls.slots(); ++k)
      step(ControlColumn(controls.values.col(k)), controls.slot);
  });
}

VectorXc evolve_state(const HamiltonianModel& model,
                      const PulseSchedule& schedule, const VectorXc& psi0,
                      double* norm_drift) {
  schedule.validate();
  return evolve_state_impl(model, psi0, norm_drift, [&](auto&& step) {
    for (const auto& w : schedule.windows)
      step(PulseSchedule::window_column(w), w.duration);
  });
}

MatrixXc evolve_unitary(const LadderLayout& layout,
                        const PhysicalParams& params,
                        const DisorderRealization& disorder,
                        const ControlMatrix& controls) {
  return evolve_unitary(HamiltonianModel(layout, params, disorder), controls);
}

VectorXc evolve_state(const VectorXc& psi0, const LadderLayout& layout,
                      const PhysicalParams& params,
                      const DisorderRealization& disorder,
                      const ControlMatrix& controls) {
  return evolve_state(HamiltonianModel(layout, params, disorder), controls,
                      psi0);
}

}  // namespace ladder
