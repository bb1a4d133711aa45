#include <doctest.h>

#include "support.hpp"

#include <fstream>

using namespace testsupport;
using stickcert::ParseError;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("stickcert_store_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("parse bundled coordinates") {
  const auto p = load_poly("13n592.tsv");
  CHECK(p.size() == 10);
  CHECK(p.name() == "13n592");
  CHECK(p.scale() == Rational(1, 10000000));
  CHECK(p.vertex(0) == geom::Point3{0, 0, 0});
  CHECK(p.vertex(1) == geom::Point3{10000000, 0, 0});
  CHECK(load_poly("13n285.tsv").size() == 11);
  for (const auto& k : bundled_knots()) CHECK(load_poly(k + ".tsv").name() == k);
}

TEST_CASE("coordinate syntax") {
  const auto a = store::parse_coordinates("0 0 0\n1,000 0 0\n0\t1_000\t0\n");
  CHECK(a.vertex(1) == geom::Point3{1000, 0, 0});
  CHECK(a.vertex(2) == geom::Point3{0, 1000, 0});
  CHECK(a.name().empty());

  const auto b = store::parse_coordinates("# name: tri\n# scale: 1/2\n# a comment\n\n0 0 0\n-1 0 0\n0 0 7\n");
  CHECK(b.name() == "tri");
  CHECK(b.scale() == Rational(1, 2));
  CHECK(b.vertex(1).x == -1);
  CHECK(store::parse_coordinates("0 0 0\n1 0 0\n0 1 0\n", Rational(3)).scale() == 3);

  try {
    store::parse_coordinates("0 0 0\n1 0\n0 1 0\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(store::parse_coordinates("0 0 0\n1 0 0\n"), ParseError);
  CHECK_THROWS_AS(store::parse_coordinates("# scale: 1/-2\n0 0 0\n1 0 0\n0 1 0\n"), ParseError);
  CHECK_THROWS_AS(store::parse_coordinates("# scale: 0/3\n0 0 0\n1 0 0\n0 1 0\n"), ParseError);
  CHECK_THROWS_AS(store::parse_coordinates("0 0 0\n1 0 x\n0 1 0\n"), ParseError);
  CHECK_THROWS_AS(store::parse_coordinates("0 0 0\n,1 0 0\n0 1 0\n"), ParseError);
  CHECK_THROWS_AS(store::parse_coordinates("0 0 0\n1__0 0 0\n0 1 0\n"), ParseError);
  CHECK_THROWS_AS(store::parse_coordinates("0 0 0\n1 0 0\n0 1 0 4\n"), ParseError);
  CHECK_THROWS_AS(store::parse_coordinates("0 0 0\n1 0 0\n2 0 0\n0 1 0\n"), stickcert::GeometryError);
}

TEST_CASE("coordinate round trip") {
  for (const auto& k : bundled_knots()) {
    CAPTURE(k);
    const std::string text = store::read_text_file(fixture(k + ".tsv"));
    const auto p = store::parse_coordinates(text);
    const std::string out = store::write_coordinates(p);
    CHECK(out == text);
    CHECK(store::parse_coordinates(out) == p);
    CHECK(store::write_coordinates(store::parse_coordinates(out)) == out);
  }
  const auto t = load_poly("small/trefoil_6stick.tsv");
  CHECK(store::parse_coordinates(store::write_coordinates(t)) == t);
  const auto anon = store::parse_coordinates("0 0 0\n1 0 0\n0 1 0\n");
  CHECK(store::write_coordinates(anon).find('#') == std::string::npos);
}

TEST_CASE("catalog round trip") {
  TempDir dir;
  const auto poly = load_poly("13n592.tsv");
  auto rec = store::make_record("13n592", poly, load_pd("labeled/15n41127.pd"));
  rec.certificates["S5"] = "degree 5\narc 0 -> (1 2)\n";
  rec.invariants["alexander"] = "1 - 2*t + 1*t^2";
  rec.invariants["determinant"] = "1";
  rec.created = rec.updated = store::utc_timestamp();
  CHECK(rec.fingerprint == diagram::fingerprint(rec.diagram));
  CHECK(rec.created.size() == 20);

  store::catalog_put(dir.path, rec);
  CHECK(fs::exists(dir.path / "13n592" / "record.txt"));
  CHECK(fs::exists(dir.path / "13n592" / "coords.tsv"));
  CHECK(fs::exists(dir.path / "13n592" / "certs" / "S5.txt"));
  CHECK(store::catalog_get(dir.path, "13n592") == rec);

  // a second read sees the same bytes and leaves them alone
  const auto before = store::read_text_file(dir.path / "13n592" / "record.txt");
  CHECK(store::catalog_get(dir.path, "13n592") == rec);
  CHECK(store::read_text_file(dir.path / "13n592" / "record.txt") == before);

  // overwriting drops stale certificates
  auto next = rec;
  next.certificates.clear();
  next.certificates["S4"] = "degree 4\n";
  store::catalog_put(dir.path, next);
  CHECK_FALSE(fs::exists(dir.path / "13n592" / "certs" / "S5.txt"));
  CHECK(store::catalog_get(dir.path, "13n592") == next);

  // records without a polygon
  const auto bare = store::make_record("bare", std::nullopt, diagram::Diagram{});
  store::catalog_put(dir.path, bare);
  CHECK(store::catalog_get(dir.path, "bare") == bare);

  CHECK_THROWS_AS(store::catalog_get(dir.path, "nope"), store::MissingRecordError);
}

TEST_CASE("catalog detects tampering") {
  TempDir dir;
  const auto rec = store::make_record("t", std::nullopt, load_pd("small/31.pd"));
  store::catalog_put(dir.path, rec);
  const auto path = dir.path / "t" / "record.txt";
  std::string text = store::read_text_file(path);
  const auto pos = text.find("X ");
  REQUIRE(pos != std::string::npos);
  // swap in the mirror crossing list
  const auto mirrored = store::make_record("t", std::nullopt, diagram::mirror(rec.diagram));
  auto mt = store::serialize_record(mirrored);
  const auto fp_line = "fingerprint " + rec.fingerprint;
  mt.replace(mt.find("fingerprint " + mirrored.fingerprint), fp_line.size(), fp_line);
  write_file(path, mt);
  CHECK_THROWS_AS(store::catalog_get(dir.path, "t"), store::CorruptRecordError);

  write_file(path, "garbage\n");
  CHECK_THROWS(store::catalog_get(dir.path, "t"));
}

TEST_CASE("record text round trip") {
  auto rec = store::make_record("x", std::nullopt, load_pd("small/52.pd"));
  rec.invariants["k"] = "v w";
  rec.created = "2026-01-01T00:00:00Z";
  rec.updated = "2026-01-02T00:00:00Z";
  const auto back = store::deserialize_record(store::serialize_record(rec));
  CHECK(back.name == rec.name);
  CHECK(back.diagram == rec.diagram);
  CHECK(back.fingerprint == rec.fingerprint);
  CHECK(back.invariants == rec.invariants);
  CHECK(back.created == rec.created);
  CHECK(back.updated == rec.updated);
}
