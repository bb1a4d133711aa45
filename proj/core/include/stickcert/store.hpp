#pragma once

// Coordinate files and the on-disk catalog.
//
// Coordinate file: one vertex per line, three integers separated by tabs or
// spaces. Digit separators ',' and '_' inside a number are ignored. Optional
// header comments:
//   # name: 15n41127
//   # scale: 1/10000000
// Any other '#' line is a comment.
//
// Catalog layout:
//   <root>/<name>/record.txt
//   <root>/<name>/coords.tsv
//   <root>/<name>/certs/<label>.txt

#include <stickcert/diagram.hpp>
#include <stickcert/geom.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stickcert::store {

/// Scale defaults to 10^-7 unless `scale` is given or the file declares one.
geom::Polygon3 parse_coordinates(std::string_view text, std::optional<Rational> scale = std::nullopt,
                                 std::string name = {});
std::string write_coordinates(const geom::Polygon3& poly);

/// Reads a file; the polygon name defaults to the file stem.
geom::Polygon3 read_coordinate_file(const std::filesystem::path& path, std::optional<Rational> scale = std::nullopt);

std::string read_text_file(const std::filesystem::path& path);

struct CatalogRecord {
  std::string name;
  std::optional<geom::Polygon3> polygon;
  diagram::Diagram diagram;
  std::string fingerprint;
  std::map<std::string, std::string> certificates;  // label -> certificate text
  std::map<std::string, std::string> invariants;    // key -> rendered value
  std::string created;
  std::string updated;

  friend bool operator==(const CatalogRecord&, const CatalogRecord&) = default;
};

/// Fills in the fingerprint from the diagram.
CatalogRecord make_record(std::string name, std::optional<geom::Polygon3> polygon, diagram::Diagram d);

class MissingRecordError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CorruptRecordError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string serialize_record(const CatalogRecord& r);
/// Certificates and the polygon live in separate files and are not part of this text.
CatalogRecord deserialize_record(std::string_view text);

/// Writes the record under <root>/<name>/ while holding <root>/.lock.
void catalog_put(const std::filesystem::path& root, const CatalogRecord& record);
/// Throws MissingRecordError or CorruptRecordError (fingerprint mismatch).
CatalogRecord catalog_get(const std::filesystem::path& root, const std::string& name);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace stickcert::store
