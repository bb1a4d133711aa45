#pragma once

// Homomorphisms from knot groups onto symmetric groups that send every
// Wirtinger generator (a meridian) to a transposition.

#include <stickcert/diagram.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace stickcert::quotients {

/// Points are 1-based. Always stored with first < second.
struct Transposition {
  int first = 1;
  int second = 2;

  Transposition() = default;
  Transposition(int a, int b);

  bool moves(int p) const { return p == first || p == second; }
  int apply(int p) const { return p == first ? second : p == second ? first : p; }

  friend auto operator<=>(const Transposition&, const Transposition&) = default;
};

/// o * t * o^-1 for transpositions (o is an involution, so the direction of
/// conjugation does not matter).
Transposition conjugate(const Transposition& o, const Transposition& t);

std::string to_string(const Transposition& t);  // "(a b)"

struct Labeling {
  int degree = 0;
  std::vector<Transposition> arcs;

  friend auto operator<=>(const Labeling&, const Labeling&) = default;
};

/// Pair-graph on {1..n} connected and touching every point.
bool transpositions_generate(const std::vector<Transposition>& ts, int n);

/// Lexicographically smallest relabeling of the points under S_n.
Labeling canonical_form(const Labeling& l);

struct RelationCheck {
  int relation = 0;  // crossing id
  bool pass = false;
};

struct HomCertificate {
  std::string fingerprint;
  Labeling labeling;
  int bound = 0;  // degree - 1
  std::vector<RelationCheck> transcript;
};

struct VerificationFailure {
  std::string reason;
};

using Verification = std::variant<HomCertificate, VerificationFailure>;

Verification verify_labeling(const diagram::WirtingerPresentation& pres, const Labeling& labeling,
                             std::string fingerprint = {});

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t raw_solutions = 0;
};

/// Conjugacy-class representatives of surjective transposition labelings,
/// sorted. max_results == 0 means no limit. Empty means none exist.
std::vector<Labeling> search_homomorphisms(const diagram::WirtingerPresentation& pres, int n, std::size_t max_results = 0,
                                           SearchStats* stats = nullptr);

struct BridgeBound {
  int bound = 1;
  std::optional<HomCertificate> certificate;
};

/// Tries n = n_max down to 3; the first surjection found gives b(K) >= n - 1.
BridgeBound bridge_lower_bound(const diagram::WirtingerPresentation& pres, int n_max, std::string fingerprint = {});

/// "arc <i> -> (<a> <b>)" lines, one per arc, '#' comments allowed.
Labeling parse_labeling(std::string_view text, int degree);
std::string format_labeling(const Labeling& l);

/// Header line, one line per arc, then one PASS/FAIL line per relation.
std::string format_certificate(const HomCertificate& cert);
HomCertificate parse_certificate(std::string_view text);

}  // namespace stickcert::quotients
