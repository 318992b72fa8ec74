#include "ladder/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ladder {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDurTol = 1e-9;

struct PhaseAngle {
  double phase;
  double theta;  // rotation angle; duration = theta / Omega at amplitude 1
};

// Four-step composite pi blocks of the shift protocol.
constexpr PhaseAngle kBlockBC[4] = {{0, 3 * kPi / 4},
                                    {kPi / 2, kPi},
                                    {kPi, kPi / 4},
                                    {-kPi / 2, kPi}};
constexpr PhaseAngle kBlockA[4] = {{0, kPi / 2},
                                   {kPi / 2, kPi},
                                   {kPi, kPi / 2},
                                   {-kPi / 2, kPi}};
// Euler-decomposed Hadamard half U_H.
constexpr PhaseAngle kHadamard[4] = {{0, kPi / 4},
                                     {kPi / 2, kPi / 2},
                                     {-kPi / 4, 3 * kPi / 4},
                                     {kPi / 4, 3 * kPi / 2}};
// Five-step CZ, all on species A.
constexpr PhaseAngle kCz[5] = {{kPi / 2, kPi / 4},
                               {0, kPi},
                               {kPi / 2, kPi / 2},
                               {0, kPi},
                               {kPi / 2, kPi / 4}};

PulseSegment seg(Species sp, const PhysicalParams& p, PhaseAngle pa) {
  return {sp, 1.0, pa.phase, pa.theta / p.rabi_of(sp)};
}

void append_block_a(PulseSchedule& s, const PhysicalParams& p) {
  for (const auto& pa : kBlockA) append_window(s, {seg(Species::A, p, pa)});
}

void append_block_bc(PulseSchedule& s, const PhysicalParams& p,
                     bool simultaneous) {
  if (simultaneous) {
    for (const auto& pa : kBlockBC)
      append_window(s, {seg(Species::B, p, pa), seg(Species::C, p, pa)});
  } else {
    // Operator product Pi_B Pi_C acts C first.
    for (const auto& pa : kBlockBC) append_window(s, {seg(Species::C, p, pa)});
    for (const auto& pa : kBlockBC) append_window(s, {seg(Species::B, p, pa)});
  }
}

}  // namespace

double PulseSchedule::total_duration() const {
  double t = 0;
  for (const auto& w : windows) t += w.duration;
  return t;
}

void PulseSchedule::validate() const {
  for (const auto& w : windows) {
    if (w.segments.empty() || w.duration <= 0)
      throw std::invalid_argument("empty or zero-duration pulse window");
    bool has_a = false, has_bc = false;
    bool seen[3] = {false, false, false};
    for (const auto& s : w.segments) {
      if (s.amplitude <= 0 || s.amplitude > 1 + 1e-12)
        throw std::invalid_argument("segment amplitude outside (0,1]");
      if (std::abs(s.duration - w.duration) > kDurTol)
        throw std::invalid_argument("segment/window duration mismatch");
      if (seen[static_cast<int>(s.species)])
        throw std::invalid_argument("duplicate species in window");
      seen[static_cast<int>(s.species)] = true;
      (s.species == Species::A ? has_a : has_bc) = true;
    }
    if (has_a && has_bc)
      throw std::invalid_argument("A driven simultaneously with B/C");
  }
}

ControlColumn PulseSchedule::window_column(const PulseWindow& w) {
  ControlColumn u = ControlColumn::Zero();
  for (const auto& s : w.segments) {
    u[channel_index(s.species, false)] = s.amplitude * std::cos(s.phase);
    u[channel_index(s.species, true)] = s.amplitude * std::sin(s.phase);
  }
  return u;
}

void append_window(PulseSchedule& s, std::vector<PulseSegment> segments) {
  if (segments.empty()) throw std::invalid_argument("empty window");
  // Split at every interior segment end so all channels in a window share
  // the window duration; shorter channels occupy the leading sub-windows.
  double t0 = 0;
  const double total =
      std::max_element(segments.begin(), segments.end(),
                       [](const auto& a, const auto& b) {
                         return a.duration < b.duration;
                       })
          ->duration;
  while (total - t0 > kDurTol) {
    double cut = total;
    for (const auto& g : segments)
      if (g.duration - t0 > kDurTol) cut = std::min(cut, g.duration);
    PulseWindow w;
    w.duration = cut - t0;
    for (const auto& g : segments)
      if (g.duration - t0 > kDurTol) {
        PulseSegment part = g;
        part.duration = w.duration;
        w.segments.push_back(part);
      }
    s.windows.push_back(std::move(w));
    t0 = cut;
  }
}

PulseSchedule shift_sequence(const PhysicalParams& params,
                             ShiftDirection /*direction*/,
                             Species icc_column_species, bool simultaneous_bc) {
  // The protocol is direction-symmetric; the direction argument is kept for
  // interface clarity only.
  PulseSchedule s;
  if (icc_column_species == Species::A) {
    append_block_bc(s, params, simultaneous_bc);
    append_block_a(s, params);
    append_block_bc(s, params, simultaneous_bc);
  } else {
    append_block_a(s, params);
    append_block_bc(s, params, simultaneous_bc);
    append_block_a(s, params);
  }
  s.validate();
  return s;
}

PulseSchedule hadamard_sequence(const PhysicalParams& params,
                                Species target_species) {
  if (target_species == Species::A)
    throw std::invalid_argument("hadamard target must be B or C");
  PulseSchedule s;
  for (const auto& pa : kHadamard)
    append_window(s, {seg(target_species, params, pa)});
  append_window(s, {seg(Species::A, params, {0, 2 * kPi})});
  for (int k = 3; k >= 0; --k) {
    PhaseAngle pa = kHadamard[k];
    pa.phase += kPi;  // R(theta, phi)^dagger = R(theta, phi + pi)
    append_window(s, {seg(target_species, params, pa)});
  }
  s.validate();
  return s;
}

PulseSchedule cz_sequence(const PhysicalParams& params) {
  PulseSchedule s;
  for (const auto& pa : kCz) append_window(s, {seg(Species::A, params, pa)});
  s.validate();
  return s;
}

void ControlMatrix::validate() const {
  if (slot < kSlotFloor - 1e-12)
    throw std::invalid_argument("slot below 0.5 ns hardware floor");
  if (values.size() > 0 && values.cwiseAbs().maxCoeff() > 1.0 + 1e-12)
    throw std::invalid_argument("control amplitude outside [-1,1]");
}

ControlMatrix schedule_to_controls(const PulseSchedule& schedule, double slot) {
  if (slot < kSlotFloor - 1e-12)
    throw std::invalid_argument("slot below 0.5 ns hardware floor");
  schedule.validate();

  std::vector<int> counts;
  int m_total = 0;
  double worst = 0;
  for (const auto& w : schedule.windows) {
    int m = static_cast<int>(std::llround(w.duration / slot));
    if (m == 0) m = 1;
    worst = std::max(worst, std::abs(m * slot - w.duration));
    counts.push_back(m);
    m_total += m;
  }

  ControlMatrix c;
  c.slot = slot;
  c.rounding_error = worst;
  c.values.setZero(kNumChannels, m_total);
  int k = 0;
  for (std::size_t i = 0; i < schedule.windows.size(); ++i) {
    const ControlColumn u = PulseSchedule::window_column(schedule.windows[i]);
    for (int r = 0; r < counts[i]; ++r) c.values.col(k++) = u;
  }
  return c;
}

PulseSchedule schedule_from_controls(const ControlMatrix& controls) {
  controls.validate();
  PulseSchedule s;
  for (int k = 0; k < controls.slots(); ++k) {
    PulseWindow w;
    w.duration = controls.slot;
    for (int sp = 0; sp < 3; ++sp) {
      const double ux = controls.values(2 * sp, k);
      const double uy = controls.values(2 * sp + 1, k);
      const double a = std::hypot(ux, uy);
      if (a > 0)
        w.segments.push_back({static_cast<Species>(sp), a, std::atan2(uy, ux),
                              controls.slot});
    }
    if (!w.segments.empty()) s.windows.push_back(std::move(w));
  }
  s.validate();
  return s;
}

void to_json(nlohmann::json& j, const PulseSegment& s) {
  j = nlohmann::json{{"species", std::string(1, to_char(s.species))},
                     {"amplitude", s.amplitude},
                     {"phase", s.phase},
                     {"duration_ns", s.duration}};
}

void from_json(const nlohmann::json& j, PulseSegment& s) {
  s.species = species_from_char(j.at("species").get<std::string>().at(0));
  s.amplitude = j.at("amplitude").get<double>();
  s.phase = j.at("phase").get<double>();
  s.duration = j.at("duration_ns").get<double>();
}

void to_json(nlohmann::json& j, const PulseSchedule& s) {
  nlohmann::json windows = nlohmann::json::array();
  for (const auto& w : s.windows)
    windows.push_back(
        {{"duration_ns", w.duration}, {"segments", w.segments}});
  j = nlohmann::json{{"windows", windows},
                     {"total_duration_ns", s.total_duration()}};
}

void from_json(const nlohmann::json& j, PulseSchedule& s) {
  s.windows.clear();
  for (const auto& jw : j.at("windows")) {
    PulseWindow w;
    w.duration = jw.at("duration_ns").get<double>();
    w.segments = jw.at("segments").get<std::vector<PulseSegment>>();
    s.windows.push_back(std::move(w));
  }
  s.validate();
}

void to_json(nlohmann::json& j, const ControlMatrix& c) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < kNumChannels; ++r) {
    std::vector<double> row(c.values.cols());
    for (int k = 0; k < c.slots(); ++k) row[k] = c.values(r, k);
    rows.push_back(row);
  }
  j = nlohmann::json{{"slot_ns", c.slot},
                     {"slots", c.slots()},
                     {"rounding_error_ns", c.rounding_error},
                     {"channels",
                      {"Ax", "Ay", "Bx", "By", "Cx", "Cy"}},
                     {"values", rows}};
}

void from_json(const nlohmann::json& j, ControlMatrix& c) {
  c.slot = j.at("slot_ns").get<double>();
  c.rounding_error = j.value("rounding_error_ns", 0.0);
  const auto rows = j.at("values");
  const int m = rows.empty() ? 0 : static_cast<int>(rows.at(0).size());
  c.values.setZero(kNumChannels, m);
  for (int r = 0; r < kNumChannels; ++r)
    for (int k = 0; k < m; ++k) c.values(r, k) = rows.at(r).at(k).get<double>();
  c.validate();
}

}  // namespace ladder
