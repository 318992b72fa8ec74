#pragma once

// Global pulse schedules: time-ordered windows of constant-amplitude,
// constant-phase drive segments, the naive analytic protocol sequences
// (ICC shift, Hadamard, CZ), and discretization onto the uniform GRAPE
// slot grid.

#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ladder/hamiltonian.hpp"
#include "ladder/params.hpp"

namespace ladder {

struct PulseSegment {
  Species species = Species::A;
  double amplitude = 1.0;  // fraction of Omega_chi, in (0, 1]
  double phase = 0.0;      // rad
  double duration = 0.0;   // ns
};

// One time window: simultaneously active segments, either {A} alone or a
// subset of {B, C}. All segments span the full window.
struct PulseWindow {
  std::vector<PulseSegment> segments;
  double duration = 0.0;
};

struct PulseSchedule {
  std::vector<PulseWindow> windows;

  double total_duration() const;
  // Throws if a window mixes A with B/C, has mismatched segment durations,
  // or violates amplitude/duration bounds.
  void validate() const;
  // Control column (u_x = a cos phi, u_y = a sin phi per species) for one
  // window.
  static ControlColumn window_column(const PulseWindow& w);
};

// Appends simultaneous segments as windows, splitting at interior segment
// ends so shorter channels are aligned at window start and zero-padded.
void append_window(PulseSchedule& s, std::vector<PulseSegment> segments);

enum class ShiftDirection { Left, Right };

// One ICC shift. The window order depends on the species of the column the
// ICC currently occupies: B/C-column ICCs use [Pi_A, Pi_B||Pi_C, Pi_A], an
// A-column ICC the dual [Pi_B||Pi_C, Pi_A, Pi_B||Pi_C]. The segment list is
// direction-symmetric. simultaneous_bc=false emits C then B sequentially.
PulseSchedule shift_sequence(const PhysicalParams& params,
                             ShiftDirection direction = ShiftDirection::Right,
                             Species icc_column_species = Species::B,
                             bool simultaneous_bc = true);

// Single-qubit Hadamard on the crossed qubit of the target species:
// U_H (4 segments), a 2*pi A rotation, then U_H reversed with phases
// shifted by pi.
PulseSchedule hadamard_sequence(const PhysicalParams& params,
                                Species target_species = Species::B);

// Two-qubit CZ across the crossed A-type coupler: five A-only segments.
PulseSchedule cz_sequence(const PhysicalParams& params);

// Piecewise-constant control amplitudes on a uniform slot grid; row order as
// in ControlColumn. Segment durations are rounded to the nearest multiple of
// the slot, with the worst rounding error recorded.
struct ControlMatrix {
  Eigen::Matrix<double, kNumChannels, Eigen::Dynamic> values;
  double slot = 0.5;             // ns; hardware floor 0.5 ns
  double rounding_error = 0.0;   // max |rounded - true| segment duration, ns

  int slots() const { return static_cast<int>(values.cols()); }
  double total_duration() const { return slot * slots(); }
  void validate() const;  // bounds: |u| <= 1, slot >= 0.5 ns
};

constexpr double kSlotFloor = 0.5;  // ns

ControlMatrix schedule_to_controls(const PulseSchedule& schedule, double slot);

// Per-slot reconstruction (one window per slot); schedule_to_controls of the
// result reproduces the input exactly.
PulseSchedule schedule_from_controls(const ControlMatrix& controls);

void to_json(nlohmann::json& j, const PulseSegment& s);
void from_json(const nlohmann::json& j, PulseSegment& s);
void to_json(nlohmann::json& j, const PulseSchedule& s);
void from_json(const nlohmann::json& j, PulseSchedule& s);
void to_json(nlohmann::json& j, const ControlMatrix& c);
void from_json(const nlohmann::json& j, ControlMatrix& c);

}  // namespace ladder
