#pragma once

// Physical parameters of the device. Internal units: angular frequencies in
// rad/ns, times in ns, hbar = 1. A value quoted in the literature as
// "f MHz" maps to f * 1e-3 rad/ns under this convention (so zeta_bar =
// "200 MHz" = 0.2 rad/ns and omega_bar = "7 GHz" = 7.0 rad/ns).

#include <array>
#include <stdexcept>

#include <json.hpp>

#include "ladder/lattice.hpp"

namespace ladder {

struct PhysicalParams {
  // Nominal qubit frequency per species (rad/ns); the simulations use equal
  // values for all three species.
  std::array<double, 3> omega_bar = {7.0, 7.0, 7.0};
  // Nominal ZZ coupling (rad/ns).
  double zeta_bar = 0.2;
  // Regular-qubit Rabi frequency per species (rad/ns); crossed qubits couple
  // at twice this value.
  std::array<double, 3> rabi = {0.01, 0.01, 0.01};
  // Blockade-regime ratio |zeta/Omega|; the primary knob.
  double eta_br = 20.0;

  // Standard operating point: Omega = zeta_bar / eta for every species.
  static PhysicalParams standard(double eta = 20.0) {
    PhysicalParams p;
    p.eta_br = eta;
    p.rabi = {p.zeta_bar / eta, p.zeta_bar / eta, p.zeta_bar / eta};
    p.validate();
    return p;
  }

  double omega_of(Species s) const { return omega_bar[static_cast<int>(s)]; }
  double rabi_of(Species s) const { return rabi[static_cast<int>(s)]; }

  void validate() const {
    for (double w : omega_bar)
      if (!(w > 0)) throw std::invalid_argument("omega_bar must be positive");
    if (!(zeta_bar > 0))
      throw std::invalid_argument("zeta_bar must be positive");
    for (double r : rabi) {
      if (!(r > 0)) throw std::invalid_argument("rabi must be positive");
      if (std::abs(eta_br - std::abs(zeta_bar / r)) > 1e-12 * eta_br)
        throw std::invalid_argument("eta_br inconsistent with zeta_bar/rabi");
    }
  }
};

void to_json(nlohmann::json& j, const PhysicalParams& p);
void from_json(const nlohmann::json& j, PhysicalParams& p);

}  // namespace ladder
