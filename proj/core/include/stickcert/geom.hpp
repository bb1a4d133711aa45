#pragma once

// Exact polygon geometry: equilaterality, regular projections, crossing
// detection and height-function extrema. Every predicate is decided with
// big-integer or rational arithmetic.

#include <stickcert/diagram.hpp>
#include <stickcert/numeric.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stickcert::geom {

struct Point3 {
  BigInt x, y, z;

  friend Point3 operator+(const Point3& a, const Point3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Point3 operator-(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  Point3 operator-() const { return {-x, -y, -z}; }
  friend bool operator==(const Point3&, const Point3&) = default;

  bool is_zero() const { return x.is_zero() && y.is_zero() && z.is_zero(); }
};

inline BigInt dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Point3 cross(const Point3& a, const Point3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

std::string to_string(const Point3& p);

/// The default unit scale of published coordinate tables: 10^-7.
Rational default_scale();

/// Closed polygon with integer vertices; geometric units are vertex * scale.
class Polygon3 {
 public:
  /// Throws GeometryError on fewer than 3 vertices, zero-length edges,
  /// three consecutive collinear vertices, or a non-positive scale.
  Polygon3(std::vector<Point3> vertices, Rational scale = default_scale(), std::string name = {});

  const std::vector<Point3>& vertices() const { return vertices_; }
  const Point3& vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }
  std::size_t size() const { return vertices_.size(); }
  const Rational& scale() const { return scale_; }
  const std::string& name() const { return name_; }
  Polygon3 with_name(std::string name) const;

  friend bool operator==(const Polygon3&, const Polygon3&) = default;

 private:
  std::vector<Point3> vertices_;
  Rational scale_;
  std::string name_;
};

class Direction {
 public:
  /// Builds the projection basis u = d x e_k (k the axis with smallest |d_k|,
  /// lowest k on ties) and v = d x u. Throws GeometryError on d = 0.
  explicit Direction(Point3 d);

  const Point3& d() const { return d_; }
  const Point3& u() const { return u_; }
  const Point3& v() const { return v_; }
  Direction negated() const { return Direction(-d_); }

  friend bool operator==(const Direction&, const Direction&) = default;

 private:
  Point3 d_, u_, v_;
};

enum class RegularityFailure {
  EdgeParallelToDirection,
  VertexOverEdge,
  TriplePoint,
  AdjacentHeightTie,
  VertexCoincidence,
};

std::string to_string(RegularityFailure f);

struct RegularityReport {
  bool regular = true;
  std::optional<RegularityFailure> failure;
  std::vector<std::size_t> witness;  // offending edge / vertex indices
};

RegularityReport check_regularity(const Polygon3& poly, const Direction& dir);

/// |v_{i+1} - v_i|^2 * scale^2, exactly.
std::vector<Rational> edge_lengths_squared(const Polygon3& poly);

struct EquilateralReport {
  bool equilateral = false;
  /// max_i |S_i / mean(S) - 1| over squared lengths S_i, exact.
  Rational max_squared_deviation;
  /// max_i |L_i - Lbar| / Lbar with Lbar^2 = mean(S); display value only.
  double max_rel_deviation = 0.0;
};

/// Decision is exact: (1 - tol)^2 mean <= S_i <= (1 + tol)^2 mean for all i.
EquilateralReport check_equilateral(const Polygon3& poly, const Rational& rel_tol);

struct DirectionSearchOptions {
  std::uint64_t max_rejections = 1'000'000;
  std::int64_t initial_bound = 64;
  std::uint64_t failures_per_doubling = 32;
};

/// Rejection-samples integer directions until one is regular. Throws
/// GeometryError after max_rejections failures.
std::pair<Direction, RegularityReport> find_regular_direction(const Polygon3& poly, std::uint64_t seed,
                                                              const DirectionSearchOptions& opts = {});

/// A transverse double point of the projection.
struct CrossingPoint {
  std::size_t over_edge = 0;
  std::size_t under_edge = 0;
  Rational over_param;   // position along over_edge in (0, 1)
  Rational under_param;  // position along under_edge in (0, 1)
  int sign = 1;
};

/// All crossings of the projection along dir, ordered by edge pair (lower edge index first).
/// Throws GeometryError if dir is not regular or two edges meet in space.
std::vector<CrossingPoint> find_crossings(const Polygon3& poly, const Direction& dir);

/// PD diagram of the projection. Crossing ids follow the order of first
/// passage when traversing from vertex 0; edge label 1 enters the first passage.
diagram::Diagram project_to_diagram(const Polygon3& poly, const Direction& dir);

class NonMorseError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Vertices strictly higher (d . v) than both neighbours. Throws NonMorseError
/// when two adjacent vertices have equal height.
int local_maxima_count(const Polygon3& poly, const Direction& dir);
int local_minima_count(const Polygon3& poly, const Direction& dir);

struct SweepResult {
  int min_count = 0;
  int max_count = 0;
  Direction min_witness{Point3{1, 0, 0}};
  Direction max_witness{Point3{1, 0, 0}};
};

/// Extremes of local_maxima_count over pseudo-random integer directions.
/// Sample i draws from its own stream seeded by (seed, i), so the result does
/// not depend on the thread count.
SweepResult direction_sweep(const Polygon3& poly, std::uint64_t samples, std::uint64_t seed, unsigned threads = 0);

Polygon3 move_vertex(const Polygon3& poly, std::size_t index, const Point3& new_vertex);

}  // namespace stickcert::geom
