#include <stickcert/certify.hpp>

#include <algorithm>
#include <sstream>

namespace stickcert::certify {

namespace {

std::string end_value(const std::optional<int>& v) { return v ? std::to_string(*v) : "inf"; }

std::string step_detail(const Step& s) {
  std::string out = quantity_name(s.target) + (s.end == End::Lower ? ".lo " : ".hi ") + end_value(s.before) + "->" +
                    std::to_string(s.after) + " input=" + std::to_string(s.input);
  if (!s.note.empty()) out += " (" + s.note + ")";
  return out;
}

// Records a tightening and aborts on an empty interval.
void tighten(KnotFacts& f, Rule rule, Quantity q, End end, int value, int input, std::string note) {
  Interval& iv = f.get(q);
  if (end == End::Lower) {
    if (value <= iv.lo) return;
    f.derivation.push_back(Step{rule, q, end, iv.lo, value, input, std::move(note)});
    iv.lo = value;
  } else {
    if (iv.hi && value >= *iv.hi) return;
    f.derivation.push_back(Step{rule, q, end, iv.hi, value, input, std::move(note)});
    iv.hi = value;
  }
  if (iv.empty()) {
    throw ContradictionError(quantity_name(q) + " interval " + to_string(iv) + " is empty after " + rule_id(rule), f);
  }
}

int floor_half(int v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); }

}  // namespace

std::string to_string(const Interval& iv) { return "[" + std::to_string(iv.lo) + ", " + end_value(iv.hi) + "]"; }

std::string rule_id(Rule r) {
  switch (r) {
    case Rule::StickUpperFromWitness: return "STICK_UPPER_FROM_WITNESS";
    case Rule::BridgeLowerFromHom: return "BRIDGE_LOWER_FROM_HOM";
    case Rule::Kuiper: return "KUIPER";
    case Rule::Randell: return "RANDELL";
    case Rule::IntegerSqueeze: return "INTEGER_SQUEEZE";
  }
  return "UNKNOWN";
}

std::string quantity_name(Quantity q) {
  switch (q) {
    case Quantity::Bridge: return "bridge";
    case Quantity::Superbridge: return "superbridge";
    case Quantity::Stick: return "stick";
  }
  return "unknown";
}

const Interval& KnotFacts::get(Quantity q) const {
  switch (q) {
    case Quantity::Bridge: return bridge;
    case Quantity::Superbridge: return superbridge;
    case Quantity::Stick: return stick;
  }
  throw std::logic_error("bad quantity");
}

Interval& KnotFacts::get(Quantity q) { return const_cast<Interval&>(static_cast<const KnotFacts&>(*this).get(q)); }

ContradictionError::ContradictionError(const std::string& what, KnotFacts facts)
    : std::runtime_error("contradiction: " + what), facts_(std::move(facts)) {}

KnotFacts make_facts(std::string name, bool nontrivial) {
  KnotFacts f;
  f.name = std::move(name);
  f.nontrivial = nontrivial;
  return f;
}

KnotFacts tighten_stick_upper(KnotFacts facts, int edges, std::string witness) {
  if (edges < 3) throw std::invalid_argument("a polygon has at least 3 edges");
  facts.witnesses.push_back(witness);
  tighten(facts, Rule::StickUpperFromWitness, Quantity::Stick, End::Upper, edges, edges, std::move(witness));
  return facts;
}

KnotFacts tighten_bridge_lower(KnotFacts facts, int degree, std::string witness) {
  if (degree < 2) throw std::invalid_argument("symmetric group degree must be at least 2");
  facts.witnesses.push_back(witness);
  tighten(facts, Rule::BridgeLowerFromHom, Quantity::Bridge, End::Lower, degree - 1, degree, std::move(witness));
  return facts;
}

KnotFacts add_stick_witness(KnotFacts facts, const geom::Polygon3& poly) {
  const int n = static_cast<int>(poly.size());
  std::string w = std::to_string(n) + "-edge polygon" + (poly.name().empty() ? "" : " " + poly.name());
  return tighten_stick_upper(std::move(facts), n, std::move(w));
}

KnotFacts add_hom_certificate(KnotFacts facts, const quotients::HomCertificate& cert) {
  if (cert.bound != cert.labeling.degree - 1) throw std::invalid_argument("certificate bound must equal degree - 1");
  for (const auto& r : cert.transcript)
    if (!r.pass) throw std::invalid_argument("certificate transcript has a failing relation");
  std::string w = "S_" + std::to_string(cert.labeling.degree) + " transposition surjection";
  if (!cert.fingerprint.empty()) w += " on diagram " + cert.fingerprint.substr(0, 12);
  return tighten_bridge_lower(std::move(facts), cert.labeling.degree, std::move(w));
}

KnotFacts saturate(KnotFacts f) {
  for (;;) {
    const std::size_t before = f.derivation.size();
    if (f.nontrivial) {
      tighten(f, Rule::Kuiper, Quantity::Superbridge, End::Lower, f.bridge.lo + 1, f.bridge.lo, "sb > b");
      if (f.superbridge.hi) tighten(f, Rule::Kuiper, Quantity::Bridge, End::Upper, *f.superbridge.hi - 1, *f.superbridge.hi, "b < sb");
    }
    if (f.stick.hi) tighten(f, Rule::Randell, Quantity::Superbridge, End::Upper, floor_half(*f.stick.hi), *f.stick.hi, "sb <= floor(stick/2)");
    tighten(f, Rule::Randell, Quantity::Stick, End::Lower, 2 * f.superbridge.lo, f.superbridge.lo, "stick >= 2 sb");
    if (f.derivation.size() == before) return f;
  }
}

KnotFacts identify_mirror(const KnotFacts& knot, const KnotFacts& mirror) {
  KnotFacts out = knot;
  out.nontrivial = knot.nontrivial || mirror.nontrivial;
  for (const auto& s : mirror.derivation) {
    if (s.rule == Rule::StickUpperFromWitness) out = tighten_stick_upper(std::move(out), s.input, "mirror " + mirror.name + ": " + s.note);
    if (s.rule == Rule::BridgeLowerFromHom) out = tighten_bridge_lower(std::move(out), s.input, "mirror " + mirror.name + ": " + s.note);
  }
  return saturate(std::move(out));
}

bool replay(const KnotFacts& facts) {
  KnotFacts state = make_facts(facts.name, facts.nontrivial);
  for (const auto& s : facts.derivation) {
    Interval& iv = state.get(s.target);
    const std::optional<int> current = s.end == End::Lower ? std::optional<int>(iv.lo) : iv.hi;
    if (current != s.before) return false;
    std::optional<int> expected;
    switch (s.rule) {
      case Rule::StickUpperFromWitness:
        if (s.target != Quantity::Stick || s.end != End::Upper) return false;
        expected = s.input;
        break;
      case Rule::BridgeLowerFromHom:
        if (s.target != Quantity::Bridge || s.end != End::Lower) return false;
        expected = s.input - 1;
        break;
      case Rule::Kuiper:
        if (!state.nontrivial) return false;
        if (s.target == Quantity::Superbridge && s.end == End::Lower) {
          if (s.input != state.bridge.lo) return false;
          expected = s.input + 1;
        } else if (s.target == Quantity::Bridge && s.end == End::Upper) {
          if (state.superbridge.hi != s.input) return false;
          expected = s.input - 1;
        } else {
          return false;
        }
        break;
      case Rule::Randell:
        if (s.target == Quantity::Superbridge && s.end == End::Upper) {
          if (state.stick.hi != s.input) return false;
          expected = floor_half(s.input);
        } else if (s.target == Quantity::Stick && s.end == End::Lower) {
          if (s.input != state.superbridge.lo) return false;
          expected = 2 * s.input;
        } else {
          return false;
        }
        break;
      case Rule::IntegerSqueeze:
        return false;
    }
    // A step must tighten, and by exactly what its rule allows.
    if (!expected || *expected != s.after) return false;
    if (s.end == End::Lower) {
      if (s.after <= iv.lo) return false;
      iv.lo = s.after;
    } else {
      if (iv.hi && s.after >= *iv.hi) return false;
      iv.hi = s.after;
    }
  }
  return state.bridge == facts.bridge && state.superbridge == facts.superbridge && state.stick == facts.stick;
}

std::string report(const KnotFacts& f) {
  std::ostringstream os;
  os << "knot: " << (f.name.empty() ? "(unnamed)" : f.name) << '\n';
  os << "nontrivial: " << (f.nontrivial ? "yes" : "no") << '\n';
  for (Quantity q : {Quantity::Bridge, Quantity::Superbridge, Quantity::Stick}) {
    const Interval& iv = f.get(q);
    os << quantity_name(q);
    if (iv.empty()) {
      os << " in " << to_string(iv) << " CONTRADICTION\n";
    } else if (iv.exact()) {
      os << " = " << iv.lo << " (exact)\n";
    } else {
      os << " in " << to_string(iv) << '\n';
    }
  }
  if (!f.witnesses.empty()) {
    os << "witnesses:\n";
    for (const auto& w : f.witnesses) os << "  - " << w << '\n';
  }
  os << "derivation:\n";
  if (f.derivation.empty()) os << "  (none)\n";
  for (std::size_t i = 0; i < f.derivation.size(); ++i) os << "  " << i + 1 << ". " << rule_id(f.derivation[i].rule) << ": " << step_detail(f.derivation[i]) << '\n';
  return os.str();
}

std::string machine_report(const KnotFacts& f) {
  std::ostringstream os;
  os << "FACT " << (f.name.empty() ? "-" : f.name) << " bridge=[" << f.bridge.lo << ',' << end_value(f.bridge.hi) << "] sb=[" << f.superbridge.lo
     << ',' << end_value(f.superbridge.hi) << "] stick=[" << f.stick.lo << ',' << end_value(f.stick.hi) << "]\n";
  for (const auto& s : f.derivation) os << "STEP " << rule_id(s.rule) << ' ' << step_detail(s) << '\n';
  return os.str();
}

}  // namespace stickcert::certify
