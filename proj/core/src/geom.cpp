#include <stickcert/geom.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <random>
#include <thread>

namespace stickcert::geom {

namespace {

struct Point2 {
  BigInt x, y;
  friend Point2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

BigInt cross2(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
BigInt dot2(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }

struct Projection {
  std::vector<Point2> points;
  std::vector<BigInt> heights;
};

Projection project(const Polygon3& poly, const Direction& dir) {
  Projection p;
  for (const auto& v : poly.vertices()) {
    p.points.push_back(Point2{dot(v, dir.u()), dot(v, dir.v())});
    p.heights.push_back(dot(v, dir.d()));
  }
  return p;
}

// Transverse intersection of projected edges i and j, or nullopt.
struct RawCrossing {
  std::size_t a, b;
  BigInt sa, sb, den;  // params sa/den, sb/den, den > 0
};

std::optional<RawCrossing> intersect(const Projection& pr, std::size_t i, std::size_t j) {
  const std::size_t n = pr.points.size();
  const Point2& A = pr.points[i];
  const Point2& B = pr.points[(i + 1) % n];
  const Point2& C = pr.points[j];
  const Point2& D = pr.points[(j + 1) % n];
  Point2 r = B - A, q = D - C, ca = C - A;
  BigInt den = cross2(r, q);
  if (den.is_zero()) return std::nullopt;
  BigInt s = cross2(ca, q);
  BigInt t = cross2(ca, r);
  if (den < 0) {
    den = -den;
    s = -s;
    t = -t;
  }
  if (s <= 0 || s >= den || t <= 0 || t >= den) return std::nullopt;
  return RawCrossing{i, j, std::move(s), std::move(t), std::move(den)};
}

bool adjacent_edges(std::size_t i, std::size_t j, std::size_t n) { return i == j || (i + 1) % n == j || (j + 1) % n == i; }

std::vector<RawCrossing> raw_crossings(const Projection& pr) {
  const std::size_t n = pr.points.size();
  std::vector<RawCrossing> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!adjacent_edges(i, j, n))
        if (auto c = intersect(pr, i, j)) out.push_back(std::move(*c));
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::string to_string(const Point3& p) {
  return "(" + p.x.str() + ", " + p.y.str() + ", " + p.z.str() + ")";
}

Rational default_scale() { return Rational(1, 10'000'000); }

Polygon3::Polygon3(std::vector<Point3> vertices, Rational scale, std::string name)
    : vertices_(std::move(vertices)), scale_(std::move(scale)), name_(std::move(name)) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw GeometryError("polygon needs at least 3 vertices, got " + std::to_string(n));
  if (scale_ <= 0) throw GeometryError("polygon scale must be positive");
  for (std::size_t i = 0; i < n; ++i) {
    if (vertices_[i] == vertices_[(i + 1) % n]) {
      throw GeometryError("zero-length edge between vertices " + std::to_string(i) + " and " + std::to_string((i + 1) % n));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& prev = vertices_[(i + n - 1) % n];
    const auto& cur = vertices_[i];
    const auto& next = vertices_[(i + 1) % n];
    if (cross(cur - prev, next - cur).is_zero()) {
      throw GeometryError("vertices " + std::to_string((i + n - 1) % n) + ", " + std::to_string(i) + ", " +
                          std::to_string((i + 1) % n) + " are collinear");
    }
  }
}

Polygon3 Polygon3::with_name(std::string name) const {
  Polygon3 copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

Direction::Direction(Point3 d) : d_(std::move(d)) {
  if (d_.is_zero()) throw GeometryError("projection direction must be nonzero");
  const BigInt ax = abs(d_.x), ay = abs(d_.y), az = abs(d_.z);
  Point3 axis{0, 0, 0};
  if (ax <= ay && ax <= az) {
    axis.x = 1;
  } else if (ay <= az) {
    axis.y = 1;
  } else {
    axis.z = 1;
  }
  u_ = cross(d_, axis);
  v_ = cross(d_, u_);
}

std::string to_string(RegularityFailure f) {
  switch (f) {
    case RegularityFailure::EdgeParallelToDirection: return "edge-parallel-to-d";
    case RegularityFailure::VertexOverEdge: return "vertex-over-edge";
    case RegularityFailure::TriplePoint: return "triple-point";
    case RegularityFailure::AdjacentHeightTie: return "adjacent-height-tie";
    case RegularityFailure::VertexCoincidence: return "vertex-coincidence";
  }
  return "unknown";
}

RegularityReport check_regularity(const Polygon3& poly, const Direction& dir) {
  const std::size_t n = poly.size();
  auto fail = [](RegularityFailure f, std::vector<std::size_t> w) {
    return RegularityReport{false, f, std::move(w)};
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (cross(poly.vertex(i + 1) - poly.vertex(i), dir.d()).is_zero()) return fail(RegularityFailure::EdgeParallelToDirection, {i});
  }
  const Projection pr = project(poly, dir);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (pr.points[i] == pr.points[j]) return fail(RegularityFailure::VertexCoincidence, {i, j});

  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (k == i || k == (i + 1) % n) continue;
      const Point2& A = pr.points[i];
      const Point2& B = pr.points[(i + 1) % n];
      Point2 e = B - A, w = pr.points[k] - A;
      if (!cross2(e, w).is_zero()) continue;
      BigInt t = dot2(w, e);
      if (t > 0 && t < dot2(e, e)) return fail(RegularityFailure::VertexOverEdge, {k, i});
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (pr.heights[i] == pr.heights[(i + 1) % n]) return fail(RegularityFailure::AdjacentHeightTie, {i, (i + 1) % n});

  // Two crossings at the same point of one edge means three edges share a point.
  std::map<std::size_t, std::vector<std::pair<Rational, std::size_t>>> along;
  for (const auto& c : raw_crossings(pr)) {
    along[c.a].emplace_back(Rational(c.sa, c.den), c.b);
    along[c.b].emplace_back(Rational(c.sb, c.den), c.a);
  }
  for (auto& [edge, params] : along) {
    std::sort(params.begin(), params.end());
    for (std::size_t k = 1; k < params.size(); ++k)
      if (params[k].first == params[k - 1].first) return fail(RegularityFailure::TriplePoint, {edge, params[k - 1].second, params[k].second});
  }
  return RegularityReport{};
}

std::vector<Rational> edge_lengths_squared(const Polygon3& poly) {
  const Rational s2 = poly.scale() * poly.scale();
  std::vector<Rational> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Point3 e = poly.vertex(i + 1) - poly.vertex(i);
    out.push_back(Rational(dot(e, e)) * s2);
  }
  return out;
}

EquilateralReport check_equilateral(const Polygon3& poly, const Rational& rel_tol) {
  if (rel_tol <= 0) throw std::invalid_argument("equilateral tolerance must be positive");
  const auto sq = edge_lengths_squared(poly);
  Rational mean = 0;
  for (const auto& s : sq) mean += s;
  mean /= static_cast<int>(sq.size());

  const Rational lo_factor = rel_tol >= 1 ? Rational(0) : (1 - rel_tol) * (1 - rel_tol);
  const Rational hi_factor = (1 + rel_tol) * (1 + rel_tol);
  EquilateralReport rep;
  rep.equilateral = true;
  for (const auto& s : sq) {
    Rational ratio = s / mean;
    Rational dev = abs(ratio - 1);
    if (dev > rep.max_squared_deviation) rep.max_squared_deviation = dev;
    rep.max_rel_deviation = std::max(rep.max_rel_deviation, std::abs(std::sqrt(ratio.convert_to<double>()) - 1.0));
    if (ratio < lo_factor || ratio > hi_factor) rep.equilateral = false;
  }
  return rep;
}

std::pair<Direction, RegularityReport> find_regular_direction(const Polygon3& poly, std::uint64_t seed,
                                                              const DirectionSearchOptions& opts) {
  std::mt19937_64 rng(seed);
  std::int64_t bound = std::max<std::int64_t>(1, opts.initial_bound);
  std::uint64_t streak = 0;
  for (std::uint64_t attempt = 0; attempt < opts.max_rejections; ++attempt) {
    std::uniform_int_distribution<std::int64_t> dist(-bound, bound);
    Point3 d{dist(rng), dist(rng), dist(rng)};
    if (!d.is_zero()) {
      Direction dir(d);
      auto rep = check_regularity(poly, dir);
      if (rep.regular) return {dir, rep};
    }
    if (++streak >= opts.failures_per_doubling) {
      streak = 0;
      if (bound < (std::int64_t{1} << 40)) bound *= 2;
    }
  }
  throw GeometryError("no regular projection direction found after " + std::to_string(opts.max_rejections) + " attempts");
}

std::vector<CrossingPoint> find_crossings(const Polygon3& poly, const Direction& dir) {
  auto rep = check_regularity(poly, dir);
  if (!rep.regular) throw GeometryError("projection direction is not regular: " + to_string(*rep.failure));
  const Projection pr = project(poly, dir);
  const std::size_t n = poly.size();
  std::vector<CrossingPoint> out;
  for (auto& c : raw_crossings(pr)) {
    const BigInt& ha = pr.heights[c.a];
    const BigInt& hb = pr.heights[c.b];
    // Heights at the crossing, both scaled by den.
    BigInt za = ha * c.den + c.sa * (pr.heights[(c.a + 1) % n] - ha);
    BigInt zb = hb * c.den + c.sb * (pr.heights[(c.b + 1) % n] - hb);
    if (za == zb) {
      throw GeometryError("edges " + std::to_string(c.a) + " and " + std::to_string(c.b) + " intersect in space");
    }
    const bool a_over = za > zb;
    CrossingPoint cp;
    cp.over_edge = a_over ? c.a : c.b;
    cp.under_edge = a_over ? c.b : c.a;
    cp.over_param = Rational(a_over ? c.sa : c.sb, c.den);
    cp.under_param = Rational(a_over ? c.sb : c.sa, c.den);
    Point2 over_dir = pr.points[(cp.over_edge + 1) % n] - pr.points[cp.over_edge];
    Point2 under_dir = pr.points[(cp.under_edge + 1) % n] - pr.points[cp.under_edge];
    cp.sign = cross2(over_dir, under_dir) > 0 ? 1 : -1;
    out.push_back(std::move(cp));
  }
  return out;
}

diagram::Diagram project_to_diagram(const Polygon3& poly, const Direction& dir) {
  const auto crossings = find_crossings(poly, dir);
  struct Passage {
    std::size_t edge;
    Rational param;
    std::size_t crossing;
    bool over;
  };
  std::vector<Passage> passages;
  for (std::size_t k = 0; k < crossings.size(); ++k) {
    passages.push_back({crossings[k].over_edge, crossings[k].over_param, k, true});
    passages.push_back({crossings[k].under_edge, crossings[k].under_param, k, false});
  }
  std::sort(passages.begin(), passages.end(), [](const Passage& a, const Passage& b) {
    return a.edge != b.edge ? a.edge < b.edge : a.param < b.param;
  });
  std::vector<int> id_of(crossings.size(), 0);
  int next_id = 1;
  std::vector<diagram::GaussEntry> code;
  for (const auto& p : passages) {
    if (id_of[p.crossing] == 0) id_of[p.crossing] = next_id++;
    code.push_back({id_of[p.crossing], p.over, crossings[p.crossing].sign});
  }
  return diagram::from_gauss_code(code);
}

namespace {

__extension__ using Wide = __int128;

int count_extrema(const std::vector<BigInt>& h, bool maxima) {
  const std::size_t n = h.size();
  int count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& prev = h[(i + n - 1) % n];
    const auto& next = h[(i + 1) % n];
    if (maxima ? (h[i] > prev && h[i] > next) : (h[i] < prev && h[i] < next)) ++count;
  }
  return count;
}

std::vector<BigInt> morse_heights(const Polygon3& poly, const Direction& dir) {
  std::vector<BigInt> h;
  for (const auto& v : poly.vertices()) h.push_back(dot(v, dir.d()));
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i] == h[(i + 1) % h.size()]) {
      throw NonMorseError("direction is not Morse: vertices " + std::to_string(i) + " and " +
                          std::to_string((i + 1) % h.size()) + " have equal height");
    }
  }
  return h;
}

}  // namespace

int local_maxima_count(const Polygon3& poly, const Direction& dir) { return count_extrema(morse_heights(poly, dir), true); }

int local_minima_count(const Polygon3& poly, const Direction& dir) { return count_extrema(morse_heights(poly, dir), false); }

namespace {

// Heights are exact either way; the narrow path only avoids allocation when
// coordinates and direction entries are small enough for 128-bit products.
class HeightEvaluator {
 public:
  explicit HeightEvaluator(const Polygon3& poly) : poly_(poly) {
    const BigInt limit = BigInt(1) << 60;
    narrow_ = true;
    for (const auto& v : poly.vertices()) {
      for (const BigInt* c : {&v.x, &v.y, &v.z}) {
        if (abs(*c) >= limit) narrow_ = false;
      }
    }
    if (narrow_) {
      for (const auto& v : poly.vertices())
        small_.push_back({v.x.convert_to<std::int64_t>(), v.y.convert_to<std::int64_t>(), v.z.convert_to<std::int64_t>()});
    }
  }

  // Returns the maxima count, or -1 if two adjacent vertices tie.
  int maxima(const std::array<std::int64_t, 3>& d) const {
    const std::size_t n = poly_.size();
    if (narrow_) {
      std::vector<Wide> h(n);
      for (std::size_t i = 0; i < n; ++i)
        h[i] = static_cast<Wide>(small_[i][0]) * d[0] + static_cast<Wide>(small_[i][1]) * d[1] +
               static_cast<Wide>(small_[i][2]) * d[2];
      int count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (h[i] == h[(i + 1) % n]) return -1;
        if (h[i] > h[(i + n - 1) % n] && h[i] > h[(i + 1) % n]) ++count;
      }
      return count;
    }
    Point3 dir{d[0], d[1], d[2]};
    std::vector<BigInt> h;
    for (const auto& v : poly_.vertices()) h.push_back(dot(v, dir));
    for (std::size_t i = 0; i < n; ++i)
      if (h[i] == h[(i + 1) % n]) return -1;
    return count_extrema(h, true);
  }

 private:
  const Polygon3& poly_;
  bool narrow_ = false;
  std::vector<std::array<std::int64_t, 3>> small_;
};

struct PartialSweep {
  int min_count = std::numeric_limits<int>::max();
  int max_count = -1;
  std::array<std::int64_t, 3> min_dir{}, max_dir{};
};

PartialSweep sweep_range(const HeightEvaluator& eval, std::uint64_t begin, std::uint64_t end, std::uint64_t seed) {
  PartialSweep part;
  constexpr double kScale = 1 << 20;
  for (std::uint64_t i = begin; i < end; ++i) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(i)));
    std::normal_distribution<double> gauss;
    for (;;) {
      std::array<std::int64_t, 3> d{std::llround(gauss(rng) * kScale), std::llround(gauss(rng) * kScale),
                                    std::llround(gauss(rng) * kScale)};
      if (d[0] == 0 && d[1] == 0 && d[2] == 0) continue;
      int m = eval.maxima(d);
      if (m < 0) continue;
      // Strict comparisons keep the lowest sample index on ties.
      if (m < part.min_count) {
        part.min_count = m;
        part.min_dir = d;
      }
      if (m > part.max_count) {
        part.max_count = m;
        part.max_dir = d;
      }
      break;
    }
  }
  return part;
}

}  // namespace

SweepResult direction_sweep(const Polygon3& poly, std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  if (samples == 0) throw std::invalid_argument("direction_sweep needs at least one sample");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, samples));
  const HeightEvaluator eval(poly);

  std::vector<std::future<PartialSweep>> parts;
  const std::uint64_t chunk = (samples + threads - 1) / threads;
  for (std::uint64_t b = 0; b < samples; b += chunk) {
    const std::uint64_t e = std::min(samples, b + chunk);
    parts.push_back(std::async(std::launch::async, sweep_range, std::cref(eval), b, e, seed));
  }
  PartialSweep total;
  for (auto& f : parts) {
    PartialSweep p = f.get();
    if (p.min_count < total.min_count) {
      total.min_count = p.min_count;
      total.min_dir = p.min_dir;
    }
    if (p.max_count > total.max_count) {
      total.max_count = p.max_count;
      total.max_dir = p.max_dir;
    }
  }
  auto to_dir = [](const std::array<std::int64_t, 3>& d) { return Direction(Point3{d[0], d[1], d[2]}); };
  return SweepResult{total.min_count, total.max_count, to_dir(total.min_dir), to_dir(total.max_dir)};
}

Polygon3 move_vertex(const Polygon3& poly, std::size_t index, const Point3& new_vertex) {
  if (index >= poly.size()) throw GeometryError("vertex index " + std::to_string(index) + " out of range");
  auto verts = poly.vertices();
  verts[index] = new_vertex;
  return Polygon3(std::move(verts), poly.scale(), poly.name());
}

}  // namespace stickcert::geom
