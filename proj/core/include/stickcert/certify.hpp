#pragma once

// Interval bookkeeping for bridge index, superbridge index and stick number.
//
// Rules:
//   STICK_UPPER_FROM_WITNESS  an n-edge polygon gives stick <= n
//   BRIDGE_LOWER_FROM_HOM     a transposition surjection onto S_n gives b >= n - 1
//   KUIPER                    b < sb for nontrivial knots
//   RANDELL                   sb <= stick / 2
//   INTEGER_SQUEEZE           rounding of the above to integers (folded into
//                             KUIPER and RANDELL steps; never emitted alone)

#include <stickcert/geom.hpp>
#include <stickcert/quotients.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stickcert::certify {

struct Interval {
  int lo = 0;
  std::optional<int> hi;  // nullopt = unbounded

  bool exact() const { return hi && *hi == lo; }
  bool empty() const { return hi && *hi < lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

std::string to_string(const Interval& iv);  // "[4, 4]" or "[4, inf]"

enum class Rule { StickUpperFromWitness, BridgeLowerFromHom, Kuiper, Randell, IntegerSqueeze };
enum class Quantity { Bridge, Superbridge, Stick };
enum class End { Lower, Upper };

std::string rule_id(Rule r);
std::string quantity_name(Quantity q);

struct Step {
  Rule rule;
  Quantity target;
  End end;
  std::optional<int> before;  // nullopt only for an unbounded upper end
  int after = 0;
  int input = 0;  // the cited value: edge count, degree, or the source bound
  std::string note;
};

struct KnotFacts {
  std::string name;
  bool nontrivial = false;
  Interval bridge{1, std::nullopt};
  Interval superbridge{1, std::nullopt};
  Interval stick{3, std::nullopt};
  std::vector<Step> derivation;
  std::vector<std::string> witnesses;

  const Interval& get(Quantity q) const;
  Interval& get(Quantity q);
};

class ContradictionError : public std::runtime_error {
 public:
  ContradictionError(const std::string& what, KnotFacts facts);
  const KnotFacts& facts() const { return facts_; }

 private:
  KnotFacts facts_;
};

KnotFacts make_facts(std::string name, bool nontrivial);

/// stick.hi <- min(stick.hi, edges).
KnotFacts tighten_stick_upper(KnotFacts facts, int edges, std::string witness);
/// bridge.lo <- max(bridge.lo, degree - 1).
KnotFacts tighten_bridge_lower(KnotFacts facts, int degree, std::string witness);

KnotFacts add_stick_witness(KnotFacts facts, const geom::Polygon3& poly);
KnotFacts add_hom_certificate(KnotFacts facts, const quotients::HomCertificate& cert);

/// Applies KUIPER (when nontrivial) and RANDELL to a fixed point.
KnotFacts saturate(KnotFacts facts);

/// Intersects the intervals of a knot and its mirror image. Every quantity
/// here is unchanged by mirroring.
KnotFacts identify_mirror(const KnotFacts& knot, const KnotFacts& mirror);

/// Replays the derivation from the definitional starting intervals; true iff
/// every step follows from its cited input and the state before it.
bool replay(const KnotFacts& facts);

std::string report(const KnotFacts& facts);
/// "FACT <name> bridge=[a,b] sb=[c,d] stick=[e,f]" then one "STEP" line per derivation step.
std::string machine_report(const KnotFacts& facts);

}  // namespace stickcert::certify
