#include <doctest.h>

#include "support.hpp"

#include <stickcert/certify.hpp>

using namespace testsupport;
namespace certify = stickcert::certify;
using certify::Interval;
using certify::KnotFacts;

namespace {

struct Event {
  bool witness;  // otherwise a hom degree
  int value;
};

KnotFacts apply(KnotFacts f, const Event& e) {
  return e.witness ? certify::tighten_stick_upper(std::move(f), e.value, "w" + std::to_string(e.value))
                   : certify::tighten_bridge_lower(std::move(f), e.value, "S" + std::to_string(e.value));
}

struct Expected {
  Interval bridge, sb, stick;
  bool contradiction;
};

/// Closed form of the fixed point: bridge.lo and stick.hi are only ever set by
/// evidence, and every other end is a function of those two.
Expected closed_form(bool nontrivial, const std::vector<Event>& events) {
  int b_lo = 1;
  std::optional<int> s_hi;
  for (const auto& e : events) {
    if (e.witness) s_hi = s_hi ? std::min(*s_hi, e.value) : e.value;
    else b_lo = std::max(b_lo, e.value - 1);
  }
  const int sb_lo = nontrivial ? std::max(1, b_lo + 1) : 1;
  std::optional<int> sb_hi;
  if (s_hi) sb_hi = *s_hi / 2;
  std::optional<int> b_hi;
  if (nontrivial && sb_hi) b_hi = *sb_hi - 1;
  Expected x{{b_lo, b_hi}, {sb_lo, sb_hi}, {std::max(3, 2 * sb_lo), s_hi}, false};
  x.contradiction = x.bridge.empty() || x.sb.empty() || x.stick.empty();
  return x;
}

KnotFacts polygon_facts(int n, bool nontrivial = true) {
  return certify::tighten_stick_upper(certify::make_facts("k", nontrivial), n, std::to_string(n) + "-gon");
}

}  // namespace

TEST_CASE("default intervals") {
  const auto f = certify::make_facts("x", false);
  CHECK(f.bridge == Interval{1, std::nullopt});
  CHECK(f.superbridge == Interval{1, std::nullopt});
  CHECK(f.stick == Interval{3, std::nullopt});
  CHECK(certify::to_string(f.stick) == "[3, inf]");
  CHECK(certify::to_string(Interval{4, 4}) == "[4, 4]");
  CHECK(Interval{4, 4}.exact());
  CHECK(Interval{5, 4}.empty());
  CHECK_FALSE(Interval{4, std::nullopt}.exact());
}

TEST_CASE("evidence steps") {
  auto f = polygon_facts(10);
  CHECK(f.stick == Interval{3, 10});
  REQUIRE(f.derivation.size() == 1);
  CHECK(f.derivation[0].rule == certify::Rule::StickUpperFromWitness);
  CHECK_FALSE(f.derivation[0].before.has_value());
  CHECK(f.derivation[0].after == 10);

  auto g = certify::tighten_stick_upper(f, 11, "11-gon");
  CHECK(g.stick == Interval{3, 10});
  CHECK(g.derivation.size() == 1);
  g = certify::tighten_stick_upper(polygon_facts(12), 10, "10-gon");
  CHECK(g.stick.hi == 10);
  CHECK(g.derivation.size() == 2);

  auto h = certify::tighten_bridge_lower(certify::make_facts("k", true), 5, "S5");
  CHECK(h.bridge.lo == 4);
  h = certify::tighten_bridge_lower(h, 3, "S3");
  CHECK(h.bridge.lo == 4);
  CHECK(h.derivation.size() == 1);
  CHECK(certify::tighten_bridge_lower(certify::make_facts("k", true), 3, "S3").bridge.lo == 2);
  CHECK_THROWS(certify::tighten_stick_upper(certify::make_facts("k", true), 2, "digon"));
  CHECK_THROWS(certify::tighten_bridge_lower(certify::make_facts("k", true), 1, "S1"));
}

TEST_CASE("saturation examples") {
  auto f = certify::saturate(certify::tighten_bridge_lower(polygon_facts(10), 5, "S5"));
  CHECK(f.bridge == Interval{4, 4});
  CHECK(f.superbridge == Interval{5, 5});
  CHECK(f.stick == Interval{10, 10});
  CHECK(certify::replay(f));
  const auto r = certify::report(f);
  CHECK(r.find("stick = 10 (exact)") != std::string::npos);
  CHECK(r.find("bridge = 4 (exact)") != std::string::npos);
  CHECK(r.find("superbridge = 5 (exact)") != std::string::npos);
  CHECK(r.find("KUIPER") != std::string::npos);
  CHECK(r.find("RANDELL") != std::string::npos);
  const auto m = certify::machine_report(f);
  CHECK(m.rfind("FACT k bridge=[4,4] sb=[5,5] stick=[10,10]\n", 0) == 0);
  CHECK(std::count(m.begin(), m.end(), '\n') == static_cast<long>(f.derivation.size()) + 1);

  f = certify::saturate(certify::tighten_bridge_lower(polygon_facts(11), 5, "S5"));
  CHECK(f.bridge == Interval{4, 4});
  CHECK(f.superbridge == Interval{5, 5});
  CHECK(f.stick == Interval{10, 11});
  CHECK(certify::report(f).find("stick in [10, 11]") != std::string::npos);

  f = certify::saturate(certify::tighten_bridge_lower(polygon_facts(6), 3, "S3"));
  CHECK(f.bridge == Interval{2, 2});
  CHECK(f.superbridge == Interval{3, 3});
  CHECK(f.stick == Interval{6, 6});

  // KUIPER does not fire for a knot not known to be nontrivial
  f = certify::saturate(polygon_facts(3, false));
  CHECK(f.superbridge == Interval{1, 1});
  CHECK(f.bridge == Interval{1, std::nullopt});
  CHECK(f.stick == Interval{3, 3});
}

TEST_CASE("contradiction") {
  const auto f = certify::tighten_bridge_lower(polygon_facts(8), 5, "S5");
  try {
    certify::saturate(f);
    FAIL("expected a contradiction");
  } catch (const certify::ContradictionError& e) {
    CHECK_FALSE(e.facts().derivation.empty());
    CHECK(std::string(e.what()).find("contradiction") != std::string::npos);
  }
}

TEST_CASE("integer squeeze gives exact values") {
  for (int b = 1; b <= 6; ++b) {
    CAPTURE(b);
    const auto f = certify::saturate(certify::tighten_bridge_lower(polygon_facts(2 * b + 2), b + 1, "hom"));
    CHECK(f.bridge == Interval{b, b});
    CHECK(f.superbridge == Interval{b + 1, b + 1});
    CHECK(f.stick == Interval{2 * b + 2, 2 * b + 2});
    CHECK(certify::replay(f));
  }
}

TEST_CASE("saturation properties on random evidence") {
  auto& rng = rng_for(20240611);
  std::uniform_int_distribution<int> count(0, 5), kind(0, 1), edges(3, 24), degree(2, 9), coin(0, 1);
  int contradictions = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const bool nontrivial = coin(rng) == 1;
    std::vector<Event> events;
    const int k = count(rng);
    for (int i = 0; i < k; ++i) events.push_back(kind(rng) ? Event{true, edges(rng)} : Event{false, degree(rng)});
    const auto expect = closed_form(nontrivial, events);

    auto run = [&](std::vector<Event> order, bool interleave) {
      KnotFacts f = certify::make_facts("r", nontrivial);
      for (const auto& e : order) {
        f = apply(std::move(f), e);
        if (interleave) f = certify::saturate(std::move(f));
      }
      return certify::saturate(std::move(f));
    };

    if (expect.contradiction) {
      ++contradictions;
      CHECK_THROWS_AS(run(events, false), certify::ContradictionError);
      continue;
    }
    const auto f = run(events, false);
    CHECK(f.bridge == expect.bridge);
    CHECK(f.superbridge == expect.sb);
    CHECK(f.stick == expect.stick);
    CHECK(certify::replay(f));
    // idempotent
    const auto again = certify::saturate(f);
    CHECK(again.derivation.size() == f.derivation.size());
    CHECK(certify::machine_report(again) == certify::machine_report(f));
    // independent of evidence order and of when saturation runs
    auto shuffled = events;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto g = run(shuffled, true);
    CHECK(g.bridge == f.bridge);
    CHECK(g.superbridge == f.superbridge);
    CHECK(g.stick == f.stick);
    CHECK(certify::replay(g));
    if (nontrivial) {
      CHECK(f.superbridge.lo >= f.bridge.lo + 1);
      CHECK(f.superbridge.lo >= 2);
    }
    if (f.stick.hi) CHECK(*f.superbridge.hi <= *f.stick.hi / 2);
    CHECK(f.stick.lo >= 2 * f.superbridge.lo);
  }
  CHECK(contradictions > 0);
}

TEST_CASE("replay rejects tampered derivations") {
  auto f = certify::saturate(certify::tighten_bridge_lower(polygon_facts(10), 5, "S5"));
  REQUIRE(certify::replay(f));
  auto g = f;
  g.derivation.back().after -= 1;
  CHECK_FALSE(certify::replay(g));
  g = f;
  g.derivation.erase(g.derivation.begin());
  CHECK_FALSE(certify::replay(g));
  g = f;
  g.derivation.push_back({certify::Rule::IntegerSqueeze, certify::Quantity::Stick, certify::End::Lower, 10, 10, 10, ""});
  CHECK_FALSE(certify::replay(g));
  g = f;
  g.nontrivial = false;
  CHECK_FALSE(certify::replay(g));
}

TEST_CASE("identify_mirror") {
  const auto a = certify::saturate(polygon_facts(11));
  const auto b = certify::saturate(certify::tighten_bridge_lower(polygon_facts(10), 5, "S5"));
  const auto m = certify::identify_mirror(a, b);
  CHECK(m.bridge == Interval{4, 4});
  CHECK(m.superbridge == Interval{5, 5});
  CHECK(m.stick == Interval{10, 10});
  CHECK(certify::replay(m));
  const auto n = certify::identify_mirror(b, a);
  CHECK(n.stick == m.stick);
  CHECK(n.bridge == m.bridge);
}

TEST_CASE("certificates and polygons as evidence") {
  const auto labeled = load_pd("labeled/15n41127.pd");
  const auto bb = quotients::bridge_lower_bound(diagram::wirtinger(labeled), 5, diagram::fingerprint(labeled));
  REQUIRE(bb.certificate.has_value());
  auto f = certify::add_hom_certificate(certify::make_facts("15n41127", true), *bb.certificate);
  f = certify::saturate(certify::add_stick_witness(std::move(f), load_poly("15n41127.tsv")));
  CHECK(f.stick == Interval{10, 10});
  CHECK(f.witnesses.size() == 2);
  auto bad = *bb.certificate;
  bad.bound = 3;
  CHECK_THROWS(certify::add_hom_certificate(certify::make_facts("x", true), bad));
  bad = *bb.certificate;
  bad.transcript[0].pass = false;
  CHECK_THROWS(certify::add_hom_certificate(certify::make_facts("x", true), bad));
}
