#pragma once

// Subcommand implementations behind the stickcert executable. Each cmd_*
// writes its report to `out`, diagnostics to `err`, and returns an exit code.

#include <stickcert/certify.hpp>
#include <stickcert/diagram.hpp>
#include <stickcert/geom.hpp>
#include <stickcert/invariants.hpp>
#include <stickcert/quotients.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stickcert::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kGeometry = 3,
  kContradiction = 4,
  kInternal = 5,
};

struct Options {
  std::uint64_t seed = 0;
  std::uint64_t samples = 100000;
  int degree_max = 6;
  Rational tol{1, 100000};
  int crossing_cap = 24;
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> catalog;
  bool machine = false;
  std::vector<int> crossings;
  std::optional<int> degree;  // homsearch: search exactly this degree
  std::size_t max_results = 0;
  bool pd_input = false;      // homsearch: input is a PD file
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws UsageError on out-of-range flags.
void validate(const Options& opts);

/// Accepts "1e-5", "0.00001" or "1/100000" and returns the exact value.
Rational parse_decimal(const std::string& text);
/// "4,14,15" -> {4, 14, 15}. Empty text gives an empty list.
std::vector<int> parse_id_list(const std::string& text);

struct Analysis {
  explicit Analysis(geom::Polygon3 p) : polygon(std::move(p)) {}

  geom::Polygon3 polygon;
  geom::EquilateralReport equilateral;
  geom::Direction direction{geom::Point3{1, 0, 0}};
  diagram::Diagram projected;
  diagram::Diagram simplified;
  invariants::LaurentPoly alexander;
  BigInt determinant;
  invariants::ColoringCount colorings3;
  std::optional<invariants::LaurentPoly> bracket;
  quotients::BridgeBound bridge;
  bool nontrivial = false;
  certify::KnotFacts facts;
};

/// The analyze pipeline without rendering. Throws ContradictionError and
/// GeometryError as they arise.
Analysis analyze_polygon(const geom::Polygon3& poly, const Options& opts);

std::string render_analysis(const Analysis& a, const Options& opts);

/// One batch table row: name, sticks, equilateral, crossings, bridge bound, conclusion.
std::string batch_row(const Analysis& a);
std::string conclusion(const certify::KnotFacts& f);

int cmd_analyze(const std::filesystem::path& coords, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const std::filesystem::path& coords, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_change(const std::filesystem::path& pd, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_batch(const std::filesystem::path& dir, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_homsearch(const std::filesystem::path& input, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_invariants(const std::filesystem::path& pd, const Options& opts, std::ostream& out, std::ostream& err);

/// Full command line, including argv[0]. Used by main and by tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stickcert::cli
