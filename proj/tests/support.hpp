#pragma once

// Fixture access and brute-force oracles shared by the unit and acceptance
// tests. The oracles deliberately avoid the library's own algorithms: they
// enumerate everything and use plain permutation arrays and 3x3 determinants.

#include <stickcert/diagram.hpp>
#include <stickcert/geom.hpp>
#include <stickcert/quotients.hpp>
#include <stickcert/store.hpp>

#include <algorithm>
#include <array>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace testsupport {

using stickcert::BigInt;
using stickcert::Rational;
namespace geom = stickcert::geom;
namespace diagram = stickcert::diagram;
namespace quotients = stickcert::quotients;
namespace store = stickcert::store;

inline std::filesystem::path fixture(const std::string& rel) { return std::filesystem::path(STICKCERT_FIXTURE_DIR) / rel; }

inline diagram::Diagram load_pd(const std::string& rel) { return diagram::parse_pd(store::read_text_file(fixture(rel))); }
inline geom::Polygon3 load_poly(const std::string& rel) { return store::read_coordinate_file(fixture(rel)); }

inline const std::vector<std::string>& bundled_knots() {
  static const std::vector<std::string> names = {"13n592", "15n41127", "13n285",  "13n293",  "13n587", "13n607",
                                                 "13n611", "13n835",   "13n1177", "13n1192", "15n41126"};
  return names;
}

inline std::vector<std::string> small_corpus() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(fixture("small")))
    if (e.path().extension() == ".pd") out.push_back("small/" + e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

// ---- crossings --------------------------------------------------------------

struct BruteCrossing {
  std::size_t over_edge, under_edge;
  Rational over_param, under_param;
  int sign;
  friend bool operator==(const BruteCrossing&, const BruteCrossing&) = default;
};

inline Rational ratio(BigInt num, BigInt den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(num, den);
}

inline BigInt det3(const geom::Point3& a, const geom::Point3& b, const geom::Point3& c) { return geom::dot(a, geom::cross(b, c)); }

/// Solves p + s*A = q + t*B + lambda*d for every non-adjacent edge pair by
/// Cramer's rule. A crossing is s, t in (0, 1); lambda > 0 puts edge p over.
/// Sets *touching when two edges meet in space.
inline std::vector<BruteCrossing> brute_crossings(const geom::Polygon3& poly, const geom::Point3& d, bool* touching = nullptr) {
  const std::size_t n = poly.size();
  std::vector<BruteCrossing> out;
  if (touching) *touching = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      const geom::Point3 P = poly.vertex(i), A = poly.vertex(i + 1) - P;
      const geom::Point3 Q = poly.vertex(j), B = poly.vertex(j + 1) - Q;
      // s*A - t*B - lambda*d = Q - P
      const geom::Point3 R = Q - P;
      const geom::Point3 mB = -B, md = -d;
      const BigInt D = det3(A, mB, md);
      if (D.is_zero()) continue;  // parallel projections never meet transversally
      const Rational s = ratio(det3(R, mB, md), D), t = ratio(det3(A, R, md), D), lambda = ratio(det3(A, mB, R), D);
      if (s <= 0 || s >= 1 || t <= 0 || t >= 1) continue;
      if (lambda == 0) {
        if (touching) *touching = true;
        continue;
      }
      const bool i_over = lambda > 0;
      const geom::Point3& over_dir = i_over ? A : B;
      const geom::Point3& under_dir = i_over ? B : A;
      const int sign = geom::dot(d, geom::cross(over_dir, under_dir)) > 0 ? 1 : -1;
      out.push_back(i_over ? BruteCrossing{i, j, s, t, sign} : BruteCrossing{j, i, t, s, sign});
    }
  }
  return out;
}

inline std::mt19937_64& rng_for(std::uint64_t seed) {
  static thread_local std::mt19937_64 rng;
  rng.seed(seed);
  return rng;
}

/// Exact test for two closed segments P + sA and Q + tB meeting in space.
inline bool segments_meet(const geom::Point3& P, const geom::Point3& A, const geom::Point3& Q, const geom::Point3& B) {
  const geom::Point3 R = Q - P;
  if (!det3(A, B, R).is_zero()) return false;  // not coplanar
  const geom::Point3 n = geom::cross(A, B);
  if (n.is_zero()) {
    if (!geom::cross(R, A).is_zero()) return false;  // parallel, different lines
    const BigInt aa = geom::dot(A, A);
    BigInt q0 = geom::dot(R, A), q1 = geom::dot(R + B, A);
    if (q0 > q1) std::swap(q0, q1);
    return q0 <= aa && q1 >= 0;
  }
  const BigInt nn = geom::dot(n, n);
  const BigInt s = geom::dot(geom::cross(R, B), n), t = geom::dot(geom::cross(R, A), n);
  return s >= 0 && s <= nn && t >= 0 && t <= nn;
}

inline bool is_embedded(const geom::Polygon3& poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_meet(poly.vertex(i), poly.vertex(i + 1) - poly.vertex(i), poly.vertex(j), poly.vertex(j + 1) - poly.vertex(j)))
        return false;
    }
  return true;
}

/// Random embedded polygon with 4..max_n vertices and coordinates in [-r, r].
inline geom::Polygon3 random_polygon(std::mt19937_64& rng, std::size_t max_n, int r) {
  std::uniform_int_distribution<std::size_t> nd(4, max_n);
  std::uniform_int_distribution<int> cd(-r, r);
  for (;;) {
    const std::size_t n = nd(rng);
    std::vector<geom::Point3> vs;
    for (std::size_t i = 0; i < n; ++i) vs.push_back({cd(rng), cd(rng), cd(rng)});
    try {
      geom::Polygon3 p(vs, Rational(1));
      if (is_embedded(p)) return p;
    } catch (const stickcert::GeometryError&) {
    }
  }
}

// ---- homomorphisms ----------------------------------------------------------

using Pair = std::pair<int, int>;
using Perm = std::vector<int>;  // 1-based images, index 0 unused

inline Perm pair_perm(Pair t, int n) {
  Perm p(n + 1);
  std::iota(p.begin(), p.end(), 0);
  std::swap(p[t.first], p[t.second]);
  return p;
}

inline Perm compose(const Perm& a, const Perm& b) {  // (a*b)(x) = a(b(x))
  Perm c(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) c[x] = a[b[x]];
  return c;
}

inline Perm inverse(const Perm& a) {
  Perm c(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) c[a[x]] = static_cast<int>(x);
  return c;
}

/// Checks every relation by multiplying permutation arrays.
inline bool relations_hold(const diagram::WirtingerPresentation& pres, const std::vector<Pair>& arcs, int n) {
  for (const auto& r : pres.relations) {
    const Perm o = pair_perm(arcs[r.over], n), in = pair_perm(arcs[r.incoming], n), out = pair_perm(arcs[r.outgoing], n);
    const Perm expect = r.sign > 0 ? compose(compose(o, in), inverse(o)) : compose(compose(inverse(o), in), o);
    if (expect != out) return false;
  }
  return true;
}

/// Generation of S_n by transpositions: close the subgroup by BFS on a small n.
inline bool generates_sn(const std::vector<Pair>& ts, int n) {
  std::vector<Perm> gens;
  for (auto t : ts) gens.push_back(pair_perm(t, n));
  Perm id(n + 1);
  std::iota(id.begin(), id.end(), 0);
  std::vector<Perm> seen{id}, frontier{id};
  std::sort(seen.begin(), seen.end());
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const auto& p : frontier)
      for (const auto& g : gens) {
        Perm q = compose(g, p);
        auto it = std::lower_bound(seen.begin(), seen.end(), q);
        if (it == seen.end() || *it != q) {
          seen.insert(it, q);
          next.push_back(q);
        }
      }
    frontier = std::move(next);
  }
  std::size_t fact = 1;
  for (int k = 2; k <= n; ++k) fact *= k;
  return seen.size() == fact;
}

inline std::vector<Pair> all_pairs(int n) {
  std::vector<Pair> ps;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) ps.push_back({a, b});
  return ps;
}

/// Smallest vector over all n! relabelings of the points.
inline std::vector<Pair> brute_canonical(const std::vector<Pair>& arcs, int n) {
  std::vector<int> perm(n + 1);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Pair> best;
  do {
    std::vector<Pair> v;
    for (auto [a, b] : arcs) {
      int x = perm[a], y = perm[b];
      v.push_back({std::min(x, y), std::max(x, y)});
    }
    if (best.empty() || v < best) best = v;
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return best;
}

/// Every surjective transposition labeling, reduced to conjugacy classes.
inline std::vector<std::vector<Pair>> brute_hom_classes(const diagram::WirtingerPresentation& pres, int n) {
  const auto ps = all_pairs(n);
  const int m = pres.n_arcs;
  std::vector<std::size_t> idx(m, 0);
  std::vector<std::vector<Pair>> classes;
  for (;;) {
    std::vector<Pair> arcs;
    for (int k = 0; k < m; ++k) arcs.push_back(ps[idx[k]]);
    if (relations_hold(pres, arcs, n) && generates_sn(arcs, n)) classes.push_back(brute_canonical(arcs, n));
    int k = 0;
    while (k < m && ++idx[k] == ps.size()) idx[k++] = 0;
    if (k == m) break;
  }
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return classes;
}

inline std::vector<Pair> as_pairs(const quotients::Labeling& l) {
  std::vector<Pair> v;
  for (const auto& t : l.arcs) v.push_back({t.first, t.second});
  return v;
}

// ---- colorings --------------------------------------------------------------

/// Fox p-colorings by enumerating all p^arcs arc labelings.
inline long brute_colorings(const diagram::WirtingerPresentation& pres, int p) {
  const int m = pres.n_arcs;
  std::vector<int> c(m, 0);
  long count = 0;
  for (;;) {
    bool ok = true;
    for (const auto& r : pres.relations)
      if (((2 * c[r.over] - c[r.incoming] - c[r.outgoing]) % p + p) % p != 0) {
        ok = false;
        break;
      }
    if (ok) ++count;
    int k = 0;
    while (k < m && ++c[k] == p) c[k++] = 0;
    if (k == m) break;
  }
  return count;
}

}  // namespace testsupport
