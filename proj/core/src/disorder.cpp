#include "ladder/disorder.hpp"

#include <random>

namespace ladder {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
}

DisorderRealization sample_disorder(const LadderLayout& layout,
                                    const PhysicalParams& params,
                                    double epsilon, std::uint64_t seed,
                                    DisorderMode mode) {
  if (epsilon < 0) throw std::invalid_argument("epsilon must be >= 0");
  DisorderRealization d = DisorderRealization::zero(layout);
  d.epsilon = epsilon;
  d.seed = seed;
  if (epsilon == 0) return d;

  // One fresh distribution per sub-stream: normal_distribution caches the
  // second Box-Muller draw, which must not leak across streams.
  if (mode != DisorderMode::ZetaOnly) {
    std::mt19937_64 rng(derive_seed(seed, 1));
    std::normal_distribution<double> unit(0.0, 1.0);
    for (const auto& q : layout.qubits)
      d.omega_offsets[q.index] =
          epsilon * params.omega_of(q.species) * unit(rng);
  }
  if (mode != DisorderMode::OmegaOnly) {
    std::mt19937_64 rng(derive_seed(seed, 2));
    std::normal_distribution<double> unit(0.0, 1.0);
    for (std::size_t e = 0; e < d.zeta_offsets.size(); ++e)
      d.zeta_offsets[e] = epsilon * params.zeta_bar * unit(rng);
  }
  return d;
}

DisorderRealization perturb_disorder(const DisorderRealization& base,
                                     double spread, std::uint64_t seed) {
  if (spread < 0) throw std::invalid_argument("spread must be >= 0");
  DisorderRealization d = base;
  if (spread == 0) return d;
  std::mt19937_64 rng(derive_seed(seed, 3));
  std::normal_distribution<double> delta(0.0, spread);
  for (auto& w : d.omega_offsets) w += delta(rng);
  return d;
}

DisorderMode disorder_mode_from_string(const std::string& s) {
  if (s == "omega_only" || s == "omega") return DisorderMode::OmegaOnly;
  if (s == "zeta_only" || s == "zeta") return DisorderMode::ZetaOnly;
  if (s == "both") return DisorderMode::Both;
  throw std::invalid_argument("unknown disorder mode: " + s);
}

std::string to_string(DisorderMode m) {
  switch (m) {
    case DisorderMode::OmegaOnly: return "omega_only";
    case DisorderMode::ZetaOnly: return "zeta_only";
    case DisorderMode::Both: return "both";
  }
  return "?";
}

void to_json(nlohmann::json& j, const DisorderRealization& d) {
  j = nlohmann::json{{"omega_offsets", d.omega_offsets},
                     {"zeta_offsets", d.zeta_offsets},
                     {"epsilon", d.epsilon},
                     {"seed", d.seed}};
}

void from_json(const nlohmann::json& j, DisorderRealization& d) {
  d.omega_offsets = j.at("omega_offsets").get<std::vector<double>>();
  d.zeta_offsets = j.at("zeta_offsets").get<std::vector<double>>();
  d.epsilon = j.at("epsilon").get<double>();
  d.seed = j.at("seed").get<std::uint64_t>();
}

}  // namespace ladder
