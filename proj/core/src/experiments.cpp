#include "ladder/experiments.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <thread>

namespace ladder {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kTwoPiMHz = 2 * 3.14159265358979323846 * 1e-3;  // rad/ns

PhysicalParams params_from_config(const json& j) {
  if (j.contains("params")) return j.at("params").get<PhysicalParams>();
  return PhysicalParams::standard(j.value("eta_br", 20.0));
}

// Deterministic work pool: results land by index regardless of worker count.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min(threads, n); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << std::setprecision(12);
  return os;
}

fs::path write_manifest(const ExperimentSpec& spec,
                        const std::vector<fs::path>& outputs,
                        double wall_seconds) {
  json m;
  m["experiment"] = spec.kind;
  m["spec_hash"] = fnv1a(spec.config.dump());
  m["code_version"] = "0.1.0";
  m["seed"] = spec.seed;
  m["n_samples"] = spec.n_samples;
  m["wall_seconds"] = wall_seconds;
  std::vector<std::string> files;
  for (const auto& p : outputs) files.push_back(p.filename().string());
  m["outputs"] = files;
  const fs::path path = spec.out_dir / "manifest.json";
  open_out(path) << m.dump(2) << "\n";
  return path;
}

json default_sweep_protocols() {
  // ICC starting from an A-type and a C-type column of the 7-qubit row.
  // (A clean shift needs one Neel column on the left and two buffer columns
  // past the target, i.e. 2 <= position <= columns-4.)
  return json::array({json{{"kind", "shift"}, {"repeat", 1}, {"icc_position", 2}},
                      json{{"kind", "shift"}, {"repeat", 1}, {"icc_position", 3}}});
}

std::vector<double> p_grid_from_config(const json& j) {
  if (j.contains("p_grid")) return j.at("p_grid").get<std::vector<double>>();
  return default_p_grid();
}

struct GrapeRowResult {
  std::string name;
  double eta = 20;
  double duration_ns = 0;
  double fbar_naive = 0, naive_std = 0;
  double fbar_grape = 0, grape_std = 0;
  int iterations = 0;
  double final_cost = 1;
  bool diverged = false;
  GrapeResult result;
  DisorderRealization disorder;
  LadderLayout layout;
  PhysicalParams params;
  ProtocolSpec protocol;
};

// Shared row pipeline for grape_table / reduced_time.
GrapeRowResult run_grape_row(const ExperimentSpec& spec, const json& row,
                             int row_index, double time_scale) {
  GrapeRowResult out;
  out.name = row.value("name", "row" + std::to_string(row_index));
  out.eta = row.value("eta_br", 20.0);
  out.params = PhysicalParams::standard(out.eta);
  out.layout = layout_from_json(row.at("layout"));
  out.protocol = protocol_from_json(row.at("protocol"));

  const double epsilon = row.value("epsilon", 0.02);
  const auto mode = disorder_mode_from_string(row.value("mode", "omega_only"));
  const auto p_grid = p_grid_from_config(row.contains("p_grid") ? row : spec.config);
  const PulseSchedule naive =
      naive_schedule(out.layout, out.protocol, out.params);

  // "Without GRAPE": naive schedule averaged over disorder realizations.
  const int naive_samples = row.value("naive_samples", spec.n_samples);
  std::vector<double> fbars(naive_samples);
  parallel_for(naive_samples, spec.threads, [&](int i) {
    const auto d =
        sample_disorder(out.layout, out.params, epsilon,
                        derive_seed(spec.seed, 100 * row_index + i), mode);
    fbars[i] = averaged_fidelity(out.protocol, out.layout, out.params, d,
                                 naive, p_grid)
                   .mean;
  });
  double m = 0;
  for (double f : fbars) m += f;
  out.fbar_naive = m / naive_samples;
  double v = 0;
  for (double f : fbars) v += (f - out.fbar_naive) * (f - out.fbar_naive);
  out.naive_std = naive_samples > 1 ? std::sqrt(v / (naive_samples - 1)) : 0;

  // "With GRAPE": optimize one fixed realization.
  out.disorder =
      sample_disorder(out.layout, out.params, epsilon,
                      derive_seed(spec.seed, 100000 + row_index), mode);
  GrapeConfig gcfg = grape_config_from_json(
      row.contains("grape") ? row.at("grape") : spec.config.value("grape", json::object()));
  const double slot = row.value("slot_ns",
                                spec.config.value("slot_ns", 2.0));
  const GrapeProblem problem = make_protocol_problem(
      out.layout, out.protocol, out.params, out.disorder);
  const ControlMatrix warm =
      warm_start_controls(out.layout, out.protocol, out.params, slot,
                          gcfg.init_jitter, gcfg.init_seed);
  out.result = time_scale == 1.0
                   ? optimize(problem, warm, gcfg)
                   : optimize_reduced_time(problem, warm, gcfg, time_scale);
  out.duration_ns = out.result.controls.total_duration();
  out.iterations = out.result.iterations;
  out.final_cost = out.result.final_cost;
  out.diverged = out.result.diverged;

  const FidelityReport rep =
      averaged_fidelity(out.protocol, out.layout, out.params, out.disorder,
                        out.result.controls, p_grid);
  out.fbar_grape = rep.mean;
  out.grape_std = rep.std_dev;
  return out;
}

std::vector<fs::path> write_grape_rows(const ExperimentSpec& spec,
                                       const std::vector<GrapeRowResult>& rows,
                                       const std::string& table_name) {
  std::vector<fs::path> outputs;
  const fs::path table_path = spec.out_dir / (table_name + ".csv");
  auto os = open_out(table_path);
  os << "name,eta_br,duration_ns,fbar_naive,naive_std,fbar_grape,grape_std,"
        "iterations,final_cost,diverged\n";
  for (const auto& r : rows)
    os << r.name << ',' << r.eta << ',' << r.duration_ns << ','
       << r.fbar_naive << ',' << r.naive_std << ',' << r.fbar_grape << ','
       << r.grape_std << ',' << r.iterations << ',' << r.final_cost << ','
       << (r.diverged ? 1 : 0) << '\n';
  outputs.push_back(table_path);

  for (const auto& r : rows) {
    const fs::path cpath = spec.out_dir / ("controls_" + r.name + ".json");
    json j;
    j["result"] = r.result;
    j["disorder"] = r.disorder;
    j["layout"] = r.layout;
    j["params"] = r.params;
    j["protocol"] = {{"id", protocol_id(r.protocol)}};
    open_out(cpath) << j.dump(2) << "\n";
    outputs.push_back(cpath);

    const fs::path tpath = spec.out_dir / ("cost_" + r.name + ".csv");
    auto ts = open_out(tpath);
    ts << "iteration,cost\n";
    for (std::size_t i = 0; i < r.result.cost_trajectory.size(); ++i)
      ts << i << ',' << r.result.cost_trajectory[i] << '\n';
    outputs.push_back(tpath);
  }
  return outputs;
}

}  // namespace

ExperimentSpec ExperimentSpec::load(const fs::path& config_file,
                                    const fs::path& out_dir) {
  std::ifstream is(config_file);
  if (!is) throw std::runtime_error("cannot read " + config_file.string());
  ExperimentSpec spec;
  is >> spec.config;
  spec.kind = spec.config.at("experiment").get<std::string>();
  spec.out_dir = out_dir;
  spec.seed = spec.config.value("seed", 12345ULL);
  spec.n_samples = spec.config.value("n_samples", 20);
  spec.threads = spec.config.value("threads", 1);
  spec.validate();
  return spec;
}

void ExperimentSpec::validate() const {
  if (kind != "disorder_sweep" && kind != "grape_table" &&
      kind != "resilience" && kind != "reduced_time")
    throw std::invalid_argument("unknown experiment kind: " + kind);
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
}

LadderLayout layout_from_json(const json& j) {
  const std::string kind = j.value("kind", "row");
  if (kind == "ladder") return build_ladder(j.value("rows", 2));
  if (kind == "reversed_h") return build_reversed_h();
  if (kind == "row")
    return build_row(j.value("n", 7), j.value("pattern_offset", 1),
                     j.value("crossed_column", -1));
  throw std::invalid_argument("unknown layout kind: " + kind);
}

ProtocolSpec protocol_from_json(const json& j) {
  ProtocolSpec p;
  p.kind = protocol_kind_from_string(j.value("kind", "shift"));
  p.repeat = j.value("repeat", 1);
  p.icc_position = j.value("icc_position", 1);
  if (j.contains("hadamard_target"))
    p.hadamard_target =
        species_from_char(j.at("hadamard_target").get<std::string>().at(0));
  return p;
}

GrapeConfig grape_config_from_json(const json& j) {
  GrapeConfig c;
  const std::string mode = j.value("cost_mode", "state_set");
  c.cost_mode = mode == "unitary" ? CostMode::Unitary : CostMode::StateSet;
  c.max_iters = j.value("max_iters", 1000);
  c.learning_rate = j.value("learning_rate", 1e-2);
  c.beta1 = j.value("beta1", 0.9);
  c.beta2 = j.value("beta2", 0.999);
  c.eps_adam = j.value("eps_adam", 1e-8);
  c.amplitude_bound = j.value("amplitude_bound", 1.0);
  c.init_seed = j.value("init_seed", 0ULL);
  c.init_jitter = j.value("init_jitter", 0.0);
  c.cost_tolerance = j.value("cost_tolerance", 1e-6);
  c.divergence_window = j.value("divergence_window", 50);
  c.log_every = j.value("log_every", 0);
  return c;
}

std::vector<fs::path> run_disorder_sweep(const ExperimentSpec& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(spec.out_dir);
  const json& cfg = spec.config;
  const PhysicalParams params = params_from_config(cfg);
  const LadderLayout layout =
      layout_from_json(cfg.value("layout", json{{"kind", "row"}, {"n", 7}}));
  std::vector<double> epsilons = cfg.value(
      "epsilons", std::vector<double>{0.0, 0.0005, 0.001, 0.002, 0.004, 0.006,
                                      0.008, 0.012, 0.016, 0.02});
  std::vector<std::string> modes = cfg.value(
      "modes", std::vector<std::string>{"omega_only", "zeta_only", "both"});
  const json protocols =
      cfg.contains("protocols") ? cfg.at("protocols") : default_sweep_protocols();
  const auto p_grid = p_grid_from_config(cfg);

  const fs::path csv_path = spec.out_dir / "sweep.csv";
  auto os = open_out(csv_path);
  // fbar: mean over samples of the per-realization p-averaged fidelity.
  // ensemble_fbar: fidelity of the sample-averaged state (complex overlaps
  // averaged over realizations before the magnitude), with a delete-one
  // jackknife stderr; this is the statistic under which phase scatter
  // across realizations registers as decoherence.
  os << "protocol,mode,epsilon,fbar,std,stderr,ensemble_fbar,"
        "ensemble_stderr,n_samples\n";

  const int n = spec.n_samples;
  const int P = static_cast<int>(p_grid.size());
  std::uint64_t combo = 0;
  for (const auto& pj : protocols) {
    const ProtocolSpec protocol = protocol_from_json(pj);
    const PulseSchedule naive = naive_schedule(layout, protocol, params);
    std::vector<VectorXc> inits(P), targets(P);
    for (int i = 0; i < P; ++i) {
      ICCState init{p_grid[i], 0.0, protocol.icc_position};
      inits[i] = make_icc_state(layout, init);
      targets[i] = ideal_target_state(layout, protocol, params, init);
    }
    for (const auto& ms : modes) {
      const DisorderMode mode = disorder_mode_from_string(ms);
      for (double eps : epsilons) {
        ++combo;
        MatrixXc overlaps(P, n);
        parallel_for(n, spec.threads, [&](int s) {
          const auto d = sample_disorder(
              layout, params, eps, derive_seed(spec.seed, 1000 * combo + s),
              mode);
          HamiltonianModel model(layout, params, d);
          const MatrixXc X = evolve_unitary(model, naive);
          for (int i = 0; i < P; ++i)
            overlaps(i, s) = targets[i].dot(X * inits[i]);
        });
        std::vector<double> fbars(n);
        for (int s = 0; s < n; ++s)
          fbars[s] = overlaps.col(s).cwiseAbs().mean();
        double m = 0;
        for (double f : fbars) m += f;
        m /= n;
        double v = 0;
        for (double f : fbars) v += (f - m) * (f - m);
        const double sd = n > 1 ? std::sqrt(v / (n - 1)) : 0;
        const VectorXc row_sums = overlaps.rowwise().sum();
        const double ens = (row_sums.cwiseAbs() / n).mean();
        double ens_se = 0;
        if (n > 1) {
          Eigen::VectorXd loo(n);
          for (int j = 0; j < n; ++j)
            loo(j) =
                (row_sums - overlaps.col(j)).cwiseAbs().mean() / (n - 1);
          ens_se = std::sqrt((n - 1.0) / n *
                             (loo.array() - loo.mean()).square().sum());
        }
        os << protocol_id(protocol) << ',' << ms << ',' << eps << ',' << m
           << ',' << sd << ',' << sd / std::sqrt(double(n)) << ',' << ens
           << ',' << ens_se << ',' << n << '\n';
      }
    }
  }
  os.close();
  std::vector<fs::path> outputs{csv_path};
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  outputs.push_back(write_manifest(spec, outputs, wall));
  return outputs;
}

std::vector<fs::path> run_grape_table(const ExperimentSpec& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(spec.out_dir);
  std::vector<GrapeRowResult> rows;
  int idx = 0;
  for (const auto& row : spec.config.at("rows"))
    rows.push_back(run_grape_row(spec, row, idx++, 1.0));
  auto outputs = write_grape_rows(spec, rows, "grape_table");
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  outputs.push_back(write_manifest(spec, outputs, wall));
  return outputs;
}

std::vector<fs::path> run_reduced_time(const ExperimentSpec& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(spec.out_dir);
  std::vector<GrapeRowResult> rows;
  int idx = 0;
  for (const auto& row : spec.config.at("rows")) {
    const double scale = row.value("time_scale",
                                   spec.config.value("time_scale", 0.5));
    rows.push_back(run_grape_row(spec, row, idx++, scale));
  }
  auto outputs = write_grape_rows(spec, rows, "reduced_time");
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  outputs.push_back(write_manifest(spec, outputs, wall));
  return outputs;
}

std::vector<fs::path> run_resilience(const ExperimentSpec& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(spec.out_dir);
  const json& cfg = spec.config;
  const double epsilon = cfg.value("epsilon", 0.02);
  std::vector<double> spreads = cfg.value(
      "spreads",
      std::vector<double>{0.0, 0.125 * kTwoPiMHz, 0.25 * kTwoPiMHz,
                          0.5 * kTwoPiMHz, 1.0 * kTwoPiMHz, 2.0 * kTwoPiMHz});

  LadderLayout layout;
  PhysicalParams params;
  ProtocolSpec protocol;
  DisorderRealization base;
  ControlMatrix controls;

  if (cfg.contains("controls_file")) {
    // Reuse a stored optimization.
    std::ifstream is(cfg.at("controls_file").get<std::string>());
    if (!is) throw std::runtime_error("cannot read controls_file");
    json stored;
    is >> stored;
    layout = stored.at("layout").get<LadderLayout>();
    params = stored.at("params").get<PhysicalParams>();
    base = stored.at("disorder").get<DisorderRealization>();
    controls = stored.at("result").at("controls").get<ControlMatrix>();
    protocol = protocol_from_json(cfg.at("protocol"));
  } else {
    params = params_from_config(cfg);
    layout = layout_from_json(cfg.at("layout"));
    protocol = protocol_from_json(cfg.at("protocol"));
    base = sample_disorder(layout, params, epsilon, derive_seed(spec.seed, 50),
                           DisorderMode::OmegaOnly);
    const GrapeConfig gcfg =
        grape_config_from_json(cfg.value("grape", json::object()));
    const double slot = cfg.value("slot_ns", 2.0);
    const GrapeProblem problem =
        make_protocol_problem(layout, protocol, params, base);
    const ControlMatrix warm = warm_start_controls(
        layout, protocol, params, slot, gcfg.init_jitter, gcfg.init_seed);
    controls = optimize(problem, warm, gcfg).controls;
  }

  const auto p_grid = p_grid_from_config(cfg);
  const auto reports =
      resilience_sweep(layout, params, protocol, base, controls, spreads,
                       spec.n_samples, derive_seed(spec.seed, 7), p_grid);

  const fs::path csv_path = spec.out_dir / "resilience.csv";
  auto os = open_out(csv_path);
  os << "spread_radns,spread_mhz,spread_pct_of_static,fbar,std,stderr,"
        "n_samples\n";
  const double sigma_static = epsilon * params.omega_of(Species::A);
  for (const auto& rep : reports)
    os << rep.epsilon << ',' << rep.epsilon / kTwoPiMHz << ','
       << (sigma_static > 0 ? 100.0 * rep.epsilon / sigma_static : 0.0) << ','
       << rep.mean << ',' << rep.std_dev << ',' << rep.std_err << ','
       << rep.n_samples << '\n';
  os.close();

  std::vector<fs::path> outputs{csv_path};
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  outputs.push_back(write_manifest(spec, outputs, wall));
  return outputs;
}

int run_experiment(const ExperimentSpec& spec) {
  if (spec.kind == "disorder_sweep") {
    run_disorder_sweep(spec);
  } else if (spec.kind == "grape_table") {
    run_grape_table(spec);
  } else if (spec.kind == "resilience") {
    run_resilience(spec);
  } else if (spec.kind == "reduced_time") {
    run_reduced_time(spec);
  } else {
    return 2;
  }
  return 0;
}

}  // namespace ladder
