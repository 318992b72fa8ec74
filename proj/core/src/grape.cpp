#include "ladder/grape.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <random>

namespace ladder {

namespace {

// Exact divided difference of f(x) = exp(-i x dt):
//   (f(a) - f(b)) / (a - b) = -i dt exp(-i mu dt) sinc(delta dt / 2),
// mu = (a+b)/2, delta = a-b; stable for all separations.
Complex phase_divided_difference(double la, double lb, double dt) {
  const double mu = 0.5 * (la + lb);
  const double x = 0.5 * (la - lb) * dt;
  const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return Complex(0, -dt) * std::exp(Complex(0, -mu * dt)) * sinc;
}

struct DriveTerm {
  std::uint64_t mask;
  double coeff;
};

// Shared machinery for both cost modes.
class GradientEngine {
 public:
  GradientEngine(const GrapeProblem& problem)
      : model_(problem.layout, problem.params, problem.disorder) {
    for (const auto& q : problem.layout.qubits)
      terms_[static_cast<int>(q.species)].push_back(
          {1ULL << q.index,
           (q.crossed ? 2.0 : 1.0) * 0.5 * problem.params.rabi_of(q.species)});
  }

  const HamiltonianModel& model() const { return model_; }

  void decompose(const ControlColumn& u, MatrixXc& V,
                 Eigen::VectorXd& lam) const {
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(model_.rwa_dense(u));
    if (es.info() != Eigen::Success)
      throw std::runtime_error("eigensolver breakdown in gradient slot");
    V = es.eigenvectors();
    lam = es.eigenvalues();
  }

  static VectorXc slot_phases(const Eigen::VectorXd& lam, double dt) {
    VectorXc ph(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i)
      ph[i] = std::exp(Complex(0, -lam[i] * dt));
    return ph;
  }

  MatrixXc gamma(const Eigen::VectorXd& lam, double dt) const {
    const Eigen::Index d = lam.size();
    MatrixXc G(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b)
        G(a, b) = phase_divided_difference(lam[a], lam[b], dt);
    return G;
  }

  // Re-free channel contractions: value_ch = Tr(H_ch P) for the sparse
  // unit-amplitude drive operators.
  std::array<Complex, kNumChannels> channel_traces(const MatrixXc& P) const {
    std::array<Complex, kNumChannels> out{};
    const Eigen::Index d = P.rows();
    for (int sp = 0; sp < 3; ++sp)
      for (const auto& t : terms_[sp]) {
        Complex tx = 0, ty = 0;
        for (Eigen::Index b = 0; b < d; ++b)
          if (b & t.mask) {
            const Complex pge = P(b ^ t.mask, b);  // row g, col e
            const Complex peg = P(b, b ^ t.mask);
            tx += t.coeff * (pge + peg);
            ty += t.coeff * (Complex(0, -1) * pge + Complex(0, 1) * peg);
          }
        out[2 * sp] += tx;
        out[2 * sp + 1] += ty;
      }
    return out;
  }

 private:
  HamiltonianModel model_;
  std::vector<DriveTerm> terms_[3];
};

GradientMatrix gradient_state_set(const GrapeProblem& problem,
                                  const ControlMatrix& controls,
                                  double* cost_out) {
  const GradientEngine eng(problem);
  const Eigen::Index d = eng.model().dim();
  const int M = controls.slots();
  const double dt = controls.slot;
  const int J = static_cast<int>(problem.initial_states.size());
  if (J == 0) throw std::invalid_argument("state-set mode needs state pairs");

  MatrixXc Psi(d, J), Tgt(d, J);
  for (int s = 0; s < J; ++s) {
    Psi.col(s) = problem.initial_states[s];
    Tgt.col(s) = problem.target_states[s];
  }

  std::vector<MatrixXc> V(M);
  std::vector<Eigen::VectorXd> lam(M);
  std::vector<MatrixXc> fwd(M + 1);  // fwd[k] = states before slot k
  fwd[0] = Psi;
  for (int k = 0; k < M; ++k) {
    eng.decompose(controls.values.col(k), V[k], lam[k]);
    const VectorXc ph = GradientEngine::slot_phases(lam[k], dt);
    fwd[k + 1] = V[k] * (ph.asDiagonal() * (V[k].adjoint() * fwd[k]));
  }

  VectorXc overlap(J);
  double fbar = 0;
  for (int s = 0; s < J; ++s) {
    overlap[s] = Tgt.col(s).dot(fwd[M].col(s));
    fbar += std::abs(overlap[s]);
  }
  fbar /= J;
  if (cost_out) *cost_out = 1.0 - fbar;

  VectorXc c(J);
  for (int s = 0; s < J; ++s) {
    const double mag = std::abs(overlap[s]);
    c[s] = mag > 0 ? -std::conj(overlap[s]) / (mag * J) : Complex(0);
  }

  GradientMatrix grad = GradientMatrix::Zero(kNumChannels, M);
  MatrixXc back = Tgt;  // back.col(s) = b_k for the current k
  for (int k = M - 1; k >= 0; --k) {
    const MatrixXc w = V[k].adjoint() * fwd[k];
    const MatrixXc z = V[k].adjoint() * back;
    MatrixXc K = (z.conjugate() * c.asDiagonal() * w.transpose())
                     .cwiseProduct(eng.gamma(lam[k], dt));
    const MatrixXc P = V[k] * K.transpose() * V[k].adjoint();
    const auto tr = eng.channel_traces(P);
    for (int ch = 0; ch < kNumChannels; ++ch) grad(ch, k) = std::real(tr[ch]);
    // b_{k-1} = X_k^dag b_k
    const VectorXc ph = GradientEngine::slot_phases(lam[k], dt);
    back = V[k] * (ph.conjugate().asDiagonal() * z);
  }
  return grad;
}

GradientMatrix gradient_unitary(const GrapeProblem& problem,
                                const ControlMatrix& controls,
                                double* cost_out) {
  const GradientEngine eng(problem);
  const Eigen::Index d = eng.model().dim();
  const int M = controls.slots();
  const double dt = controls.slot;
  if (problem.target_unitary.rows() != d)
    throw std::invalid_argument("target unitary dimension mismatch");

  std::vector<MatrixXc> V(M);
  std::vector<Eigen::VectorXd> lam(M);
  std::vector<MatrixXc> prefix(M);  // prefix[k] = X_k ... X_0
  MatrixXc X = MatrixXc::Identity(d, d);
  for (int k = 0; k < M; ++k) {
    eng.decompose(controls.values.col(k), V[k], lam[k]);
    const VectorXc ph = GradientEngine::slot_phases(lam[k], dt);
    X = V[k] * (ph.asDiagonal() * (V[k].adjoint() * X));
    prefix[k] = X;
  }

  const Complex T = (problem.target_unitary.adjoint() * X).trace();
  const double mag = std::abs(T);
  if (cost_out) *cost_out = std::clamp(1.0 - mag / d, 0.0, 1.0);
  GradientMatrix grad = GradientMatrix::Zero(kNumChannels, M);
  if (mag == 0) return grad;  // subgradient at the modulus kink
  const Complex c = -std::conj(T) / (mag * static_cast<double>(d));

  MatrixXc B = problem.target_unitary.adjoint();
  for (int k = M - 1; k >= 0; --k) {
    const MatrixXc& A = k > 0 ? prefix[k - 1] : MatrixXc(MatrixXc::Identity(d, d));
    const MatrixXc G = V[k].adjoint() * (A * B) * V[k];
    MatrixXc K = (c * G.transpose()).cwiseProduct(eng.gamma(lam[k], dt));
    const MatrixXc P = V[k] * K.transpose() * V[k].adjoint();
    const auto tr = eng.channel_traces(P);
    for (int ch = 0; ch < kNumChannels; ++ch) grad(ch, k) = std::real(tr[ch]);
    // B_{k-1} = B_k X_k
    const VectorXc ph = GradientEngine::slot_phases(lam[k], dt);
    B = ((B * V[k]) * ph.asDiagonal()) * V[k].adjoint();
  }
  return grad;
}

}  // namespace

GrapeProblem make_protocol_problem(const LadderLayout& layout,
                                   const ProtocolSpec& protocol,
                                   const PhysicalParams& params,
                                   const DisorderRealization& disorder,
                                   const std::vector<double>& training_p,
                                   double phi) {
  GrapeProblem pb;
  pb.layout = layout;
  pb.params = params;
  pb.disorder = disorder;
  const PulseSchedule naive = naive_schedule(layout, protocol, params);
  pb.target_unitary = ideal_blockade_unitary(layout, params, naive);
  for (double p : training_p) {
    ICCState init{p, phi, protocol.icc_position};
    pb.initial_states.push_back(make_icc_state(layout, init));
    pb.target_states.push_back(
        ideal_target_state(layout, protocol, params, init));
  }
  return pb;
}

ControlMatrix warm_start_controls(const LadderLayout& layout,
                                  const ProtocolSpec& protocol,
                                  const PhysicalParams& params, double slot,
                                  double jitter, std::uint64_t seed) {
  ControlMatrix c =
      schedule_to_controls(naive_schedule(layout, protocol, params), slot);
  if (jitter > 0) {
    std::mt19937_64 rng(derive_seed(seed, 4));
    std::normal_distribution<double> noise(0.0, jitter);
    for (int k = 0; k < c.slots(); ++k)
      for (int r = 0; r < kNumChannels; ++r)
        c.values(r, k) = std::clamp(c.values(r, k) + noise(rng), -1.0, 1.0);
  }
  return c;
}

GradientMatrix grape_gradient(const GrapeProblem& problem,
                              const ControlMatrix& controls, CostMode mode,
                              double* cost_out) {
  controls.validate();
  if (controls.slots() == 0) {
    if (cost_out) {
      GrapeProblem pb = problem;  // cost of the identity evolution
      if (mode == CostMode::Unitary) {
        const Eigen::Index d = problem.target_unitary.rows();
        *cost_out = trace_cost(MatrixXc::Identity(d, d), problem.target_unitary);
      } else {
        double f = 0;
        for (std::size_t s = 0; s < pb.initial_states.size(); ++s)
          f += std::abs(pb.target_states[s].dot(pb.initial_states[s]));
        *cost_out = 1.0 - f / pb.initial_states.size();
      }
    }
    return GradientMatrix::Zero(kNumChannels, 0);
  }
  return mode == CostMode::Unitary
             ? gradient_unitary(problem, controls, cost_out)
             : gradient_state_set(problem, controls, cost_out);
}

GrapeResult optimize(const GrapeProblem& problem,
                     const ControlMatrix& initial_controls,
                     const GrapeConfig& config) {
  const auto t_start = std::chrono::steady_clock::now();
  ControlMatrix u = initial_controls;
  u.validate();
  const int M = u.slots();

  GrapeResult res;
  res.controls = u;

  GradientMatrix m = GradientMatrix::Zero(kNumChannels, M);
  GradientMatrix v = GradientMatrix::Zero(kNumChannels, M);
  double best = std::numeric_limits<double>::infinity();
  int above_start = 0;

  for (int it = 0; it < config.max_iters; ++it) {
    double cost = 0;
    const GradientMatrix g = grape_gradient(problem, u, config.cost_mode, &cost);
    res.cost_trajectory.push_back(cost);
    res.iterations = it + 1;
    if (cost < best) {
      best = cost;
      res.controls = u;
    }
    if (config.log_every > 0 && it % config.log_every == 0)
      std::cerr << "grape iter " << it << " cost " << cost << "\n";

    if (it >= config.divergence_window &&
        res.cost_trajectory[it] >
            res.cost_trajectory[it - 1] + 1e-12)
      res.monotonic_after_warmup = false;

    if (cost <= config.cost_tolerance) break;
    if (cost > res.cost_trajectory.front() + 1e-12) {
      if (++above_start >= config.divergence_window) {
        res.diverged = true;
        break;
      }
    } else {
      above_start = 0;
    }
    if (it + 1 == config.max_iters || M == 0) break;

    // Adam step with elementwise clamping.
    const double t = it + 1;
    m = config.beta1 * m + (1 - config.beta1) * g;
    v = config.beta2 * v.array().matrix() +
        (1 - config.beta2) * g.cwiseProduct(g);
    const double bc1 = 1 - std::pow(config.beta1, t);
    const double bc2 = 1 - std::pow(config.beta2, t);
    for (int k = 0; k < M; ++k)
      for (int r = 0; r < kNumChannels; ++r) {
        const double mhat = m(r, k) / bc1;
        const double vhat = v(r, k) / bc2;
        const double step =
            config.learning_rate * mhat / (std::sqrt(vhat) + config.eps_adam);
        u.values(r, k) = std::clamp(u.values(r, k) - step,
                                    -config.amplitude_bound,
                                    config.amplitude_bound);
      }
  }

  res.final_cost = best;
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return res;
}

GrapeResult optimize_reduced_time(const GrapeProblem& problem,
                                  const ControlMatrix& initial_controls,
                                  const GrapeConfig& config,
                                  double time_scale) {
  if (time_scale <= 0 || time_scale > 1)
    throw std::invalid_argument("time_scale must be in (0,1]");
  const int M = initial_controls.slots();
  const int Mr = std::max(1, static_cast<int>(std::llround(M * time_scale)));
  ControlMatrix u = initial_controls;
  if (Mr != M) {
    // Time-compress the warm-start waveform onto the shorter grid.
    u.values.resize(kNumChannels, Mr);
    for (int k = 0; k < Mr; ++k)
      u.values.col(k) =
          initial_controls.values.col(static_cast<int>(k * int64_t(M) / Mr));
  }
  return optimize(problem, u, config);
}

std::vector<FidelityReport> resilience_sweep(
    const LadderLayout& layout, const PhysicalParams& params,
    const ProtocolSpec& protocol, const DisorderRealization& base_disorder,
    const ControlMatrix& controls, const std::vector<double>& spreads,
    int n_samples, std::uint64_t seed, const std::vector<double>& p_grid,
    double phi) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  std::vector<FidelityReport> out;
  std::uint64_t counter = 0;
  for (double spread : spreads) {
    if (spread < 0) throw std::invalid_argument("spread must be >= 0");
    FidelityReport rep;
    rep.epsilon = spread;
    rep.seed = seed;
    rep.protocol = protocol_id(protocol);
    for (int s = 0; s < n_samples; ++s) {
      const DisorderRealization d =
          perturb_disorder(base_disorder, spread, derive_seed(seed, counter++));
      const FidelityReport one = averaged_fidelity(protocol, layout, params, d,
                                                   controls, p_grid, phi);
      rep.entries.push_back({spread, phi, one.mean});
    }
    rep.finalize();
    out.push_back(std::move(rep));
  }
  return out;
}

void to_json(nlohmann::json& j, const GrapeResult& r) {
  j = nlohmann::json{{"controls", r.controls},
                     {"final_cost", r.final_cost},
                     {"iterations", r.iterations},
                     {"wall_seconds", r.wall_seconds},
                     {"monotonic_after_warmup", r.monotonic_after_warmup},
                     {"diverged", r.diverged},
                     {"cost_trajectory", r.cost_trajectory}};
}

}  // namespace ladder
