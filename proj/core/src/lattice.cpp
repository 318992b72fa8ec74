#include "ladder/lattice.hpp"

#include <algorithm>
#include <set>

namespace ladder {

namespace {

// Intra-row species pattern, periodic with period 4.
constexpr Species kPattern[4] = {Species::C, Species::A, Species::B,
                                 Species::A};

Species pattern_at(int column, int offset = 0) {
  return kPattern[((column + offset) % 4 + 4) % 4];
}

void add_edge(LadderLayout& l, int a, int b) {
  if (a > b) std::swap(a, b);
  l.edges.push_back({a, b});
}

void finalize_degrees(LadderLayout& l) {
  for (auto& q : l.qubits) q.degree = 0;
  for (const auto& e : l.edges) {
    l.qubits[e.a].degree++;
    l.qubits[e.b].degree++;
  }
  for (auto& q : l.qubits) {
    // Circle/triangle frequency corrections apply to B/C qubits only;
    // A-type qubits are never corrected.
    q.freq_class = (q.species == Species::A) ? 0 : q.degree - 2;
  }
}

}  // namespace

Species species_from_char(char c) {
  switch (c) {
    case 'A': return Species::A;
    case 'B': return Species::B;
    case 'C': return Species::C;
  }
  throw std::invalid_argument(std::string("unknown species '") + c + "'");
}

std::vector<std::vector<int>> LadderLayout::adjacency() const {
  std::vector<std::vector<int>> adj(qubits.size());
  for (const auto& e : edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  for (auto& v : adj) std::sort(v.begin(), v.end());
  return adj;
}

std::vector<int> LadderLayout::species_members(Species s) const {
  std::vector<int> out;
  for (const auto& q : qubits)
    if (q.species == s) out.push_back(q.index);
  return out;
}

int LadderLayout::grid_index(int row, int column) const {
  for (const auto& q : qubits)
    if (!q.coupler && q.row == row && q.column == column) return q.index;
  throw std::out_of_range("no grid qubit at (" + std::to_string(row) + "," +
                          std::to_string(column) + ")");
}

void LadderLayout::validate() const {
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (e.a == e.b) throw std::runtime_error("self-loop edge");
    if (e.a < 0 || e.b >= num_qubits() || e.a > e.b)
      throw std::runtime_error("edge index out of range or unordered");
    if (!seen.insert({e.a, e.b}).second)
      throw std::runtime_error("duplicate edge");
    const auto& qa = qubits[e.a];
    const auto& qb = qubits[e.b];
    if (qa.species == qb.species)
      throw std::runtime_error("adjacent qubits share a species");
    if (qa.species == Species::A && qb.species == Species::A)
      throw std::runtime_error("adjacent A-type qubits");
  }
  for (const auto& q : qubits) {
    if (q.species != Species::A && q.freq_class != q.degree - 2)
      throw std::runtime_error("freq_class != degree-2 on B/C qubit");
    if (q.freq_class < -1 || q.freq_class > 1)
      throw std::runtime_error("freq_class outside {-1,0,+1}");
  }
}

LadderLayout build_ladder(int n_rows) {
  if (n_rows <= 0) throw std::invalid_argument("build_ladder: N must be >= 1");
  const int N = n_rows;
  LadderLayout l;
  l.rows = N;
  l.columns = 2 * N + 3;
  l.name = "ladder_N" + std::to_string(N);

  // Crossed single-qubit-gate column: center of the processing area, nudged
  // off A columns so the crossed qubit is B/C type.
  int cstar = N + 1;
  if (pattern_at(cstar) == Species::A) cstar -= 1;

  for (int r = 0; r < N; ++r)
    for (int c = 0; c < l.columns; ++c) {
      QubitSpec q;
      q.index = r * l.columns + c;
      q.species = pattern_at(c);
      q.crossed = (c == cstar);
      q.row = r;
      q.column = c;
      l.qubits.push_back(q);
    }

  for (int r = 0; r < N; ++r)
    for (int c = 0; c + 1 < l.columns; ++c)
      add_edge(l, r * l.columns + c, r * l.columns + c + 1);

  // Inter-row crossed A-type couplers. Attachment columns alternate between
  // two B/C columns so no grid qubit collects couplers from both sides
  // (degree would exceed 3 otherwise).
  int alt = (cstar + 2 < l.columns) ? cstar + 2 : cstar - 2;
  for (int r = 0; r + 1 < N; ++r) {
    QubitSpec q;
    q.index = N * l.columns + r;
    q.species = Species::A;
    q.crossed = true;
    q.row = r;
    q.column = (r % 2 == 0) ? cstar : alt;
    q.coupler = true;
    l.qubits.push_back(q);
    add_edge(l, q.index, r * l.columns + q.column);
    add_edge(l, q.index, (r + 1) * l.columns + q.column);
  }

  finalize_degrees(l);
  l.validate();
  return l;
}

LadderLayout build_row(int n, int pattern_offset, int crossed_column) {
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument("build_row: n must be odd and >= 3");
  LadderLayout l;
  l.rows = 1;
  l.columns = n;
  l.name = "row" + std::to_string(n);
  for (int c = 0; c < n; ++c) {
    QubitSpec q;
    q.index = c;
    q.species = pattern_at(c, pattern_offset);
    q.crossed = (c == crossed_column);
    q.row = 0;
    q.column = c;
    l.qubits.push_back(q);
  }
  for (int c = 0; c + 1 < n; ++c) add_edge(l, c, c + 1);
  finalize_degrees(l);
  l.validate();
  return l;
}

LadderLayout build_reversed_h() {
  LadderLayout l;
  l.rows = 2;
  l.columns = 3;
  l.name = "reversed_h";
  // Two A-C-A arms ...
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 3; ++c) {
      QubitSpec q;
      q.index = r * 3 + c;
      q.species = (c == 1) ? Species::C : Species::A;
      q.row = r;
      q.column = c;
      l.qubits.push_back(q);
    }
  // ... bridged by a single crossed A-type qubit between the two C's.
  QubitSpec bridge;
  bridge.index = 6;
  bridge.species = Species::A;
  bridge.crossed = true;
  bridge.row = 0;
  bridge.column = 1;
  bridge.coupler = true;
  l.qubits.push_back(bridge);

  add_edge(l, 0, 1);
  add_edge(l, 1, 2);
  add_edge(l, 3, 4);
  add_edge(l, 4, 5);
  add_edge(l, 1, 6);
  add_edge(l, 4, 6);
  finalize_degrees(l);
  l.validate();
  return l;
}

void to_json(nlohmann::json& j, const QubitSpec& q) {
  j = nlohmann::json{{"index", q.index},
                     {"species", std::string(1, to_char(q.species))},
                     {"crossed", q.crossed},
                     {"freq_class", q.freq_class},
                     {"degree", q.degree},
                     {"row", q.row},
                     {"column", q.column},
                     {"coupler", q.coupler}};
}

void from_json(const nlohmann::json& j, QubitSpec& q) {
  q.index = j.at("index").get<int>();
  q.species = species_from_char(j.at("species").get<std::string>().at(0));
  q.crossed = j.at("crossed").get<bool>();
  q.freq_class = j.at("freq_class").get<int>();
  q.degree = j.at("degree").get<int>();
  q.row = j.at("row").get<int>();
  q.column = j.at("column").get<int>();
  q.coupler = j.at("coupler").get<bool>();
}

void to_json(nlohmann::json& j, const LadderLayout& l) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : l.edges) edges.push_back({e.a, e.b});
  j = nlohmann::json{{"name", l.name},
                     {"rows", l.rows},
                     {"columns", l.columns},
                     {"qubits", l.qubits},
                     {"edges", edges}};
}

void from_json(const nlohmann::json& j, LadderLayout& l) {
  l.name = j.at("name").get<std::string>();
  l.rows = j.at("rows").get<int>();
  l.columns = j.at("columns").get<int>();
  l.qubits = j.at("qubits").get<std::vector<QubitSpec>>();
  l.edges.clear();
  for (const auto& e : j.at("edges"))
    l.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  l.validate();
}

}  // namespace ladder
