#pragma once

// Planar knot diagrams in PD form.
//
// Slot convention: a crossing X[a,b,c,d] lists its four incident edge labels
// starting with the incoming under-strand and proceeding counterclockwise.
// The under-strand runs a -> c. For a positive crossing the over-strand runs
// d -> b, for a negative one b -> d. Edge labels run 1..2c and increase by one
// along the orientation of the knot (2c wraps to 1).

#include <stickcert/numeric.hpp>

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace stickcert::diagram {

struct Crossing {
  int id = 0;
  std::array<int, 4> slots{};
  int sign = 1;

  int under_in() const { return slots[0]; }
  int under_out() const { return slots[2]; }
  int over_in() const { return sign > 0 ? slots[3] : slots[1]; }
  int over_out() const { return sign > 0 ? slots[1] : slots[3]; }
  int over_in_slot() const { return sign > 0 ? 3 : 1; }
  int over_out_slot() const { return sign > 0 ? 1 : 3; }

  friend bool operator==(const Crossing&, const Crossing&) = default;
};

class Diagram {
 public:
  Diagram() = default;
  explicit Diagram(std::vector<Crossing> crossings) : crossings_(std::move(crossings)) {}

  const std::vector<Crossing>& crossings() const { return crossings_; }
  int n_crossings() const { return static_cast<int>(crossings_.size()); }
  bool is_unknot_diagram() const { return crossings_.empty(); }

  /// Index into crossings() of the crossing with the given id, if any.
  std::optional<std::size_t> find(int id) const;

  int writhe() const;

  friend bool operator==(const Diagram&, const Diagram&) = default;

 private:
  std::vector<Crossing> crossings_;
};

/// nullopt when the diagram is valid; otherwise the first defect found.
std::optional<std::string> validate(const Diagram& d);

/// Throws DiagramError with the defect text if the diagram is invalid.
void require_valid(const Diagram& d);

struct GaussEntry {
  int crossing = 0;
  bool over = false;
  int sign = 1;
  friend bool operator==(const GaussEntry&, const GaussEntry&) = default;
};

/// Signed Gauss code, traversal order starting at the head of edge 1.
std::vector<GaussEntry> gauss_code(const Diagram& d);

/// Rebuilds the PD diagram of a signed Gauss code. Edge labels are assigned so
/// that the edge leaving the first listed passage is label 1.
Diagram from_gauss_code(const std::vector<GaussEntry>& code);

std::string format_gauss_code(const std::vector<GaussEntry>& code);

struct WirtingerRelation {
  int crossing = 0;
  int incoming = 0;  // under-arc entering the crossing
  int outgoing = 0;  // under-arc leaving the crossing
  int over = 0;      // conjugating arc
  int sign = 1;      // +1: outgoing = over * incoming * over^-1, -1: over^-1 * incoming * over
  friend bool operator==(const WirtingerRelation&, const WirtingerRelation&) = default;
};

struct WirtingerPresentation {
  int n_arcs = 1;
  std::vector<WirtingerRelation> relations;
  /// arc index of each edge label (index 0 unused); empty for the unknot diagram.
  std::vector<int> arc_of_edge;

  friend bool operator==(const WirtingerPresentation&, const WirtingerPresentation&) = default;
};

WirtingerPresentation wirtinger(const Diagram& d);

/// Line format: "arcs <n>" followed by "rel <outgoing> <over> <incoming> <sign>".
std::string format_presentation(const WirtingerPresentation& p);
WirtingerPresentation parse_presentation(std::string_view text);

using CrossingChangeSet = std::set<int>;

Diagram change_crossings(const Diagram& d, const CrossingChangeSet& ids);
Diagram mirror(const Diagram& d);

/// Greedy Reidemeister I / II reduction until neither applies.
Diagram simplify(const Diagram& d);

/// Renumbers edge labels by traversal starting at the lowest label present
/// and sorts crossings by id. Crossing ids are preserved.
Diagram relabel(const Diagram& d);

/// Text PD format: one "X a,b,c,d" line per crossing, '#' comments.
Diagram parse_pd(std::string_view text);
std::string format_pd(const Diagram& d);

/// Lowercase hex SHA-256 of format_pd(d).
std::string fingerprint(const Diagram& d);

}  // namespace stickcert::diagram
