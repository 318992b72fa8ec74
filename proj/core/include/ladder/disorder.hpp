#pragma once

// Static fabrication disorder: Gaussian offsets on qubit frequencies and on
// ZZ couplings, plus the perturbation sampler used by resilience sweeps.
//
// Seeding rule (documented contract): every stream is an mt19937_64 seeded
// with splitmix64(master ^ (0x9E3779B97F4A7C15 * (index + 1))). A disorder
// realization uses sub-streams index 1 (omega draws) and 2 (zeta draws) of
// its own seed, so omega offsets coincide across modes at equal seed.

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "ladder/lattice.hpp"
#include "ladder/params.hpp"

namespace ladder {

enum class DisorderMode { OmegaOnly, ZetaOnly, Both };

struct DisorderRealization {
  std::vector<double> omega_offsets;  // per qubit, rad/ns
  std::vector<double> zeta_offsets;   // per edge, rad/ns
  double epsilon = 0.0;
  std::uint64_t seed = 0;

  static DisorderRealization zero(const LadderLayout& layout) {
    DisorderRealization d;
    d.omega_offsets.assign(layout.num_qubits(), 0.0);
    d.zeta_offsets.assign(layout.num_edges(), 0.0);
    return d;
  }
};

// Deterministic stream splitting: child seed for (master, index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// omega_offsets[i] ~ N(0, epsilon * omega_bar(species_i)), zeta_offsets[e] ~
// N(0, epsilon * zeta_bar); channels suppressed by `mode` are identically 0.
DisorderRealization sample_disorder(const LadderLayout& layout,
                                    const PhysicalParams& params,
                                    double epsilon, std::uint64_t seed,
                                    DisorderMode mode = DisorderMode::Both);

// Adds i.i.d. N(0, spread) draws to the omega offsets; zeta untouched.
DisorderRealization perturb_disorder(const DisorderRealization& base,
                                     double spread, std::uint64_t seed);

DisorderMode disorder_mode_from_string(const std::string& s);
std::string to_string(DisorderMode m);

void to_json(nlohmann::json& j, const DisorderRealization& d);
void from_json(const nlohmann::json& j, DisorderRealization& d);

}  // namespace ladder
