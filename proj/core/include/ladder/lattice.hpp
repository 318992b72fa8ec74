#pragma once

// Qubit graph of the globally-driven ladder QPU: three drive species (A/B/C),
// crossed qubits with doubled drive coupling, always-on nearest-neighbor ZZ
// edges, and connectivity-dependent frequency corrections.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace ladder {

enum class Species : std::uint8_t { A = 0, B = 1, C = 2 };

inline char to_char(Species s) { return "ABC"[static_cast<int>(s)]; }

Species species_from_char(char c);

struct QubitSpec {
  int index = 0;
  Species species = Species::A;
  bool crossed = false;   // drive coupling doubled (Omega -> 2*Omega)
  int freq_class = 0;     // static frequency correction, in units of zeta_bar
  int degree = 0;
  // Grid placement; inter-row coupler qubits sit between rows (row = lower
  // row index, coupler = true).
  int row = 0;
  int column = 0;
  bool coupler = false;
};

struct Edge {
  int a = 0;  // a < b always
  int b = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct LadderLayout {
  std::vector<QubitSpec> qubits;
  std::vector<Edge> edges;
  int rows = 0;
  int columns = 0;
  std::string name;

  int num_qubits() const { return static_cast<int>(qubits.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  // Neighbor index lists, sorted ascending.
  std::vector<std::vector<int>> adjacency() const;

  std::vector<int> species_members(Species s) const;

  // Grid qubit id at (row, column); throws if no such qubit.
  int grid_index(int row, int column) const;

  void validate() const;  // throws std::runtime_error on broken invariants
};

// Full ladder: N rows x (2N+3) columns with intra-row pattern CABACABA...,
// N crossed B/C qubits (one per row, shared column) and N-1 crossed A-type
// inter-row couplers. Total qubit count 2N^2 + 4N - 1.
LadderLayout build_ladder(int n_rows);

// Single open chain of n qubits (n odd >= 3) cut from the intra-row pattern.
// pattern_offset shifts the CABA... periodic pattern so sub-chains of the
// full ladder can be reproduced; the default offset 1 yields the symmetric
// A-B-A-C-... chains, offset 0 starts at C. crossed_column (if >= 0) marks
// one qubit as crossed, e.g. the single-qubit-gate target.
LadderLayout build_row(int n, int pattern_offset = 1, int crossed_column = -1);

// 7-qubit two-arm layout for the two-qubit gate: two A-C-A arms whose middle
// C qubits are bridged by one crossed A-type qubit.
LadderLayout build_reversed_h();

void to_json(nlohmann::json& j, const QubitSpec& q);
void from_json(const nlohmann::json& j, QubitSpec& q);
void to_json(nlohmann::json& j, const LadderLayout& l);
void from_json(const nlohmann::json& j, LadderLayout& l);

}  // namespace ladder
