#pragma once

// Config-driven experiment harness: disorder sweeps, GRAPE tables,
// resilience curves, and reduced-time runs, with CSV outputs and a JSON
// run manifest. Config schema is documented in the repository README.

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "ladder/grape.hpp"

namespace ladder {

struct ExperimentSpec {
  std::string kind;  // disorder_sweep | grape_table | resilience | reduced_time
  nlohmann::json config;
  std::filesystem::path out_dir;
  std::uint64_t seed = 12345;
  int n_samples = 20;
  int threads = 1;

  static ExperimentSpec load(const std::filesystem::path& config_file,
                             const std::filesystem::path& out_dir);
  void validate() const;
};

// Shared config fragments.
LadderLayout layout_from_json(const nlohmann::json& j);
ProtocolSpec protocol_from_json(const nlohmann::json& j);
GrapeConfig grape_config_from_json(const nlohmann::json& j);

// Individual drivers; each writes its datasets plus manifest.json into
// spec.out_dir and returns the list of files written.
std::vector<std::filesystem::path> run_disorder_sweep(const ExperimentSpec& spec);
std::vector<std::filesystem::path> run_grape_table(const ExperimentSpec& spec);
std::vector<std::filesystem::path> run_resilience(const ExperimentSpec& spec);
std::vector<std::filesystem::path> run_reduced_time(const ExperimentSpec& spec);

// Dispatch on spec.kind; returns a process exit code.
int run_experiment(const ExperimentSpec& spec);

}  // namespace ladder
