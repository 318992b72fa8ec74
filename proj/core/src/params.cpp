#include "ladder/params.hpp"

namespace ladder {

void to_json(nlohmann::json& j, const PhysicalParams& p) {
  j = nlohmann::json{{"omega_bar", p.omega_bar},
                     {"zeta_bar", p.zeta_bar},
                     {"rabi", p.rabi},
                     {"eta_br", p.eta_br}};
}

void from_json(const nlohmann::json& j, PhysicalParams& p) {
  if (j.contains("eta_br") && !j.contains("rabi")) {
    p = PhysicalParams::standard(j.at("eta_br").get<double>());
    if (j.contains("zeta_bar")) {
      p.zeta_bar = j.at("zeta_bar").get<double>();
      for (auto& r : p.rabi) r = p.zeta_bar / p.eta_br;
    }
    if (j.contains("omega_bar")) j.at("omega_bar").get_to(p.omega_bar);
  } else {
    j.at("omega_bar").get_to(p.omega_bar);
    p.zeta_bar = j.at("zeta_bar").get<double>();
    j.at("rabi").get_to(p.rabi);
    p.eta_br = j.at("eta_br").get<double>();
  }
  p.validate();
}

}  // namespace ladder
