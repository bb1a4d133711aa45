#include <doctest.h>

#include "support.hpp"

#include <cli.hpp>

#include <fstream>
#include <sstream>

using namespace testsupport;
namespace cli = stickcert::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "stickcert");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("stickcert_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name, std::ios::binary) << text;
    return path / name;
  }
};

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("option helpers") {
  CHECK(cli::parse_decimal("1e-5") == Rational(1, 100000));
  CHECK(cli::parse_decimal("0.00001") == Rational(1, 100000));
  CHECK(cli::parse_decimal("1/100000") == Rational(1, 100000));
  CHECK(cli::parse_decimal("2.5E1") == 25);
  CHECK_THROWS_AS(cli::parse_decimal("abc"), cli::UsageError);
  CHECK(cli::parse_id_list("4,14,15") == std::vector<int>{4, 14, 15});
  CHECK(cli::parse_id_list("").empty());
  CHECK_THROWS_AS(cli::parse_id_list("4,,x"), cli::UsageError);
  cli::Options o;
  CHECK_NOTHROW(cli::validate(o));
  o.samples = 0;
  CHECK_THROWS_AS(cli::validate(o), cli::UsageError);
  o = {};
  o.degree_max = 2;
  CHECK_THROWS_AS(cli::validate(o), cli::UsageError);
  o = {};
  o.tol = -1;
  CHECK_THROWS_AS(cli::validate(o), cli::UsageError);
}

TEST_CASE("exit codes") {
  TempDir dir;
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"--help"}).code == cli::kOk);
  CHECK(run({"sweep", fixture("13n592.tsv").string(), "--samples", "0"}).code == cli::kUsage);
  CHECK(run({"analyze", (dir.path / "missing.tsv").string()}).code == cli::kUsage);
  const auto bad = dir.write("bad.tsv", "0 0 0\n1 0\n0 1 0\n");
  const auto r = run({"analyze", bad.string()});
  CHECK(r.code == cli::kParse);
  CHECK(contains(r.err, "2"));
  const auto line = dir.write("line.tsv", "0 0 0\n1 0 0\n2 0 0\n0 1 0\n");
  CHECK(run({"analyze", line.string()}).code == cli::kGeometry);
  const auto bad_pd = dir.write("bad.pd", "X 1,2,3\n");
  CHECK(run({"invariants", bad_pd.string()}).code == cli::kParse);
  CHECK(run({"change", fixture("labeled/15n41127.pd").string(), "--crossings", "99"}).code == cli::kUsage);
}

TEST_CASE("analyze a triangle") {
  TempDir dir;
  const auto tri = dir.write("tri.tsv", "# name: tri\n# scale: 1/1\n0 0 0\n1 0 0\n0 1 0\n");
  const auto r = run({"analyze", tri.string(), "--machine"});
  CHECK(r.code == cli::kOk);
  CHECK(contains(r.out, "FACT tri bridge=[1,inf] sb=[1,1] stick=[3,3]"));
  CHECK_FALSE(contains(r.out, "BRIDGE_LOWER_FROM_HOM"));
}

TEST_CASE("analyze 15n41127") {
  TempDir dir;
  const auto r = run({"analyze", fixture("15n41127.tsv").string(), "--machine", "--degree-max", "5", "--catalog", (dir.path / "cat").string()});
  CHECK(r.code == cli::kOk);
  CHECK(contains(r.out, "FACT 15n41127 bridge=[4,4] sb=[5,5] stick=[10,10]"));
  CHECK(contains(r.out, "BRIDGE_LOWER_FROM_HOM"));
  const auto rec = store::catalog_get(dir.path / "cat", "15n41127");
  CHECK(rec.polygon == load_poly("15n41127.tsv"));
  CHECK_FALSE(rec.certificates.empty());

  const auto human = run({"analyze", fixture("15n41127.tsv").string(), "--degree-max", "5"});
  CHECK(human.code == cli::kOk);
  CHECK(contains(human.out, "stick = 10 (exact)"));
  // deterministic
  CHECK(run({"analyze", fixture("15n41127.tsv").string(), "--degree-max", "5"}).out == human.out);
}

TEST_CASE("change") {
  TempDir dir;
  const auto pd = fixture("labeled/15n41127.pd").string();
  const auto one = run({"change", pd, "--crossings", "4", "--machine", "--degree-max", "5"});
  CHECK(one.code == cli::kOk);
  CHECK(contains(one.out, "CHANGE crossings=4 "));
  CHECK(contains(one.out, "HOM degree=5 bound=4"));

  const auto two = run({"change", pd, "--crossings", "14,15", "--machine", "--degree-max", "5", "-o", (dir.path / "c.pd").string()});
  CHECK(two.code == cli::kOk);
  const auto written = diagram::parse_pd(store::read_text_file(dir.path / "c.pd"));
  CHECK(written == diagram::change_crossings(load_pd("labeled/15n41127.pd"), {14, 15}));

  const auto none = run({"change", pd, "--machine", "--degree-max", "5"});
  CHECK(none.code == cli::kOk);
  CHECK(contains(none.out, "fingerprint=" + diagram::fingerprint(load_pd("labeled/15n41127.pd"))));
  CHECK(contains(none.out, "HOM degree=5 bound=4"));
}

TEST_CASE("sweep") {
  TempDir dir;
  std::string text = "# name: convex\n# scale: 1/1\n";
  for (int k = 0; k < 10; ++k) {
    const double a = 2 * 3.14159265358979 * k / 10;
    text += std::to_string(std::lround(1000 * std::cos(a))) + " " + std::to_string(std::lround(1000 * std::sin(a))) + " 0\n";
  }
  const auto r = run({"sweep", dir.write("convex.tsv", text).string(), "--samples", "2000", "--machine"});
  CHECK(r.code == cli::kOk);
  CHECK(contains(r.out, " min=1 max=1 "));
  const auto k = run({"sweep", fixture("13n592.tsv").string(), "--samples", "5000", "--machine", "--seed", "7"});
  CHECK(k.code == cli::kOk);
  CHECK(contains(k.out, "seed=7"));
  CHECK(run({"sweep", fixture("13n592.tsv").string(), "--samples", "5000", "--machine", "--seed", "7"}).out == k.out);
}

TEST_CASE("batch") {
  TempDir empty;
  const auto e = run({"batch", empty.path.string()});
  CHECK(e.code == cli::kOk);
  CHECK(e.out == "name\tsticks\tequilateral\tcrossings\tbridge_lower\tconclusion\n");

  TempDir dir;
  for (const std::string k : {"13n592", "15n41127"}) fs::copy_file(fixture(k + ".tsv"), dir.path / (k + ".tsv"));
  dir.write("zz_bad.tsv", "0 0 0\n1 0\n0 1 0\n");
  dir.write("notes.txt", "ignored\n");
  const auto r = run({"batch", dir.path.string(), "--degree-max", "5"});
  CHECK(r.code == cli::kParse);
  CHECK(count_lines(r.out) == 4);
  CHECK(contains(r.out, "13n592\t10\t"));
  CHECK(contains(r.out, "bridge=4 sb=5 stick=10"));
  CHECK(contains(r.out, "error\tzz_bad.tsv\t"));
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("homsearch and invariants") {
  TempDir dir;
  const auto pd = fixture("small/31.pd").string();
  const auto h = run({"homsearch", pd, "--pd", "--degree", "3"});
  CHECK(h.code == cli::kOk);
  CHECK(contains(h.out, "degree 3: 1 conjugacy class "));
  const auto pres = dir.write("t.pres", diagram::format_presentation(diagram::wirtinger(load_pd("small/31.pd"))));
  CHECK(run({"homsearch", pres.string(), "--degree", "3"}).out == h.out);
  CHECK(run({"homsearch", pres.string(), "--degree", "4"}).code == cli::kOk);

  const auto i = run({"invariants", pd, "--machine"});
  CHECK(i.code == cli::kOk);
  CHECK(contains(i.out, "DETERMINANT 3\n"));
  CHECK(contains(i.out, "3_COLORINGS 9\n"));
  CHECK(contains(i.out, "ALEXANDER 1 - 1*t + 1*t^2\n"));
}
