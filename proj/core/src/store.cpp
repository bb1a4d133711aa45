#include <stickcert/store.hpp>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cctype>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace stickcert::store {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

BigInt parse_bigint(const std::string& token, int line) {
  std::string digits;
  std::size_t i = 0;
  if (!token.empty() && (token[0] == '-' || token[0] == '+')) {
    if (token[0] == '-') digits += '-';
    i = 1;
  }
  bool any = false;
  char prev = 0;
  for (; i < token.size(); ++i) {
    const char c = token[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      any = true;
    } else if ((c == ',' || c == '_') && any && i + 1 < token.size() && prev != ',' && prev != '_') {
      // digit separator
    } else {
      throw ParseError("not an integer: '" + token + "'", line);
    }
    prev = c;
  }
  if (!any || prev == ',' || prev == '_') throw ParseError("not an integer: '" + token + "'", line);
  return BigInt(digits);
}

Rational parse_scale(const std::string& text, int line) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(parse_bigint(trim(text), line));
    const BigInt num = parse_bigint(trim(text.substr(0, slash)), line);
    const BigInt den = parse_bigint(trim(text.substr(slash + 1)), line);
    if (den.is_zero()) throw ParseError("scale denominator is zero", line);
    if (num <= 0 || den < 0) throw ParseError("scale must be positive", line);
    return Rational(num, den);
  } catch (const ParseError&) {
    throw ParseError("bad scale '" + text + "' (expected p/q)", line);
  }
}

std::string rational_text(const Rational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  return numerator(r).str() + "/" + denominator(r).str();
}

void write_file_atomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

void check_name(const std::string& name) {
  if (name.empty() || name == "." || name == ".." || name.find('/') != std::string::npos ||
      name.find('\\') != std::string::npos || name.find('\n') != std::string::npos)
    throw std::invalid_argument("bad catalog record name '" + name + "'");
}

class LockFile {
 public:
  explicit LockFile(const fs::path& path) {
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw std::system_error(errno, std::generic_category(), "open " + path.string());
    if (::flock(fd_, LOCK_EX) != 0) {
      const int err = errno;
      ::close(fd_);
      throw std::system_error(err, std::generic_category(), "flock " + path.string());
    }
  }
  ~LockFile() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  LockFile(const LockFile&) = delete;
  LockFile& operator=(const LockFile&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace

geom::Polygon3 parse_coordinates(std::string_view text, std::optional<Rational> scale, std::string name) {
  std::optional<Rational> declared_scale;
  std::string declared_name;
  std::vector<geom::Point3> vertices;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(std::string_view(line).substr(1));
      if (body.rfind("name:", 0) == 0) declared_name = trim(std::string_view(body).substr(5));
      if (body.rfind("scale:", 0) == 0) declared_scale = parse_scale(body.substr(6), line_no);
      continue;
    }
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.size() != 3)
      throw ParseError("expected 3 coordinates, found " + std::to_string(tokens.size()), line_no);
    vertices.push_back({parse_bigint(tokens[0], line_no), parse_bigint(tokens[1], line_no), parse_bigint(tokens[2], line_no)});
  }
  if (vertices.size() < 3) throw ParseError("need at least 3 vertices, found " + std::to_string(vertices.size()));
  const Rational s = scale ? *scale : declared_scale ? *declared_scale : geom::default_scale();
  if (name.empty()) name = declared_name;
  return geom::Polygon3(std::move(vertices), s, std::move(name));
}

std::string write_coordinates(const geom::Polygon3& poly) {
  std::string out;
  if (!poly.name().empty()) out += "# name: " + poly.name() + '\n';
  if (poly.scale() != geom::default_scale()) out += "# scale: " + rational_text(poly.scale()) + '\n';
  for (const auto& p : poly.vertices()) out += p.x.str() + '\t' + p.y.str() + '\t' + p.z.str() + '\n';
  return out;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

geom::Polygon3 read_coordinate_file(const fs::path& path, std::optional<Rational> scale) {
  auto poly = parse_coordinates(read_text_file(path), scale);
  if (poly.name().empty()) poly = poly.with_name(path.stem().string());
  return poly;
}

CatalogRecord make_record(std::string name, std::optional<geom::Polygon3> polygon, diagram::Diagram d) {
  CatalogRecord r;
  r.name = std::move(name);
  r.polygon = std::move(polygon);
  r.fingerprint = diagram::fingerprint(d);
  r.diagram = std::move(d);
  return r;
}

std::string serialize_record(const CatalogRecord& r) {
  std::string out;
  out += "name " + r.name + '\n';
  out += "fingerprint " + r.fingerprint + '\n';
  out += "created " + r.created + '\n';
  out += "updated " + r.updated + '\n';
  for (const auto& [k, v] : r.invariants) out += "invariant " + k + ' ' + v + '\n';
  out += "pd\n" + diagram::format_pd(r.diagram) + "end\n";
  return out;
}

CatalogRecord deserialize_record(std::string_view text) {
  CatalogRecord r;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool have_pd = false;
  auto value = [&](const std::string& l, std::size_t key_len) {
    return l.size() > key_len ? l.substr(key_len + 1) : std::string();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("name", 0) == 0 && (line.size() == 4 || line[4] == ' ')) {
      r.name = value(line, 4);
    } else if (line.rfind("fingerprint", 0) == 0) {
      r.fingerprint = value(line, 11);
    } else if (line.rfind("created", 0) == 0) {
      r.created = value(line, 7);
    } else if (line.rfind("updated", 0) == 0) {
      r.updated = value(line, 7);
    } else if (line.rfind("invariant ", 0) == 0) {
      const std::string rest = line.substr(10);
      const auto sp = rest.find(' ');
      if (sp == std::string::npos) throw ParseError("invariant line needs a key and a value", line_no);
      r.invariants[rest.substr(0, sp)] = rest.substr(sp + 1);
    } else if (line == "pd") {
      std::string pd;
      bool closed = false;
      while (std::getline(in, line)) {
        ++line_no;
        if (line == "end") {
          closed = true;
          break;
        }
        pd += line + '\n';
      }
      if (!closed) throw ParseError("pd block not terminated by 'end'", line_no);
      r.diagram = diagram::parse_pd(pd);
      have_pd = true;
    } else if (!line.empty()) {
      throw ParseError("unrecognized record line", line_no);
    }
  }
  if (!have_pd) throw ParseError("record has no pd block");
  return r;
}

void catalog_put(const fs::path& root, const CatalogRecord& record) {
  check_name(record.name);
  if (record.fingerprint != diagram::fingerprint(record.diagram))
    throw std::invalid_argument("record fingerprint does not match its diagram");
  fs::create_directories(root);
  LockFile lock(root / ".lock");
  const fs::path dir = root / record.name;
  fs::create_directories(dir / "certs");
  for (const auto& entry : fs::directory_iterator(dir / "certs")) {
    if (entry.path().extension() == ".txt" && !record.certificates.count(entry.path().stem().string()))
      fs::remove(entry.path());
  }
  for (const auto& [label, text] : record.certificates) {
    check_name(label);
    write_file_atomic(dir / "certs" / (label + ".txt"), text);
  }
  if (record.polygon) {
    write_file_atomic(dir / "coords.tsv", write_coordinates(*record.polygon));
  } else {
    fs::remove(dir / "coords.tsv");
  }
  // record.txt last: a reader that sees it sees a complete record.
  write_file_atomic(dir / "record.txt", serialize_record(record));
}

CatalogRecord catalog_get(const fs::path& root, const std::string& name) {
  check_name(name);
  const fs::path dir = root / name;
  if (!fs::is_regular_file(dir / "record.txt")) throw MissingRecordError("no catalog record '" + name + "' in " + root.string());
  CatalogRecord r;
  try {
    r = deserialize_record(read_text_file(dir / "record.txt"));
  } catch (const std::exception& e) {
    throw CorruptRecordError("record '" + name + "': " + e.what());
  }
  if (r.name != name) throw CorruptRecordError("record '" + name + "' is stored under name '" + r.name + "'");
  if (diagram::fingerprint(r.diagram) != r.fingerprint)
    throw CorruptRecordError("record '" + name + "': fingerprint mismatch");
  if (fs::is_regular_file(dir / "coords.tsv")) {
    try {
      r.polygon = parse_coordinates(read_text_file(dir / "coords.tsv"));
    } catch (const std::exception& e) {
      throw CorruptRecordError("record '" + name + "' coords.tsv: " + e.what());
    }
  }
  if (fs::is_directory(dir / "certs")) {
    for (const auto& entry : fs::directory_iterator(dir / "certs")) {
      if (entry.path().extension() == ".txt") r.certificates[entry.path().stem().string()] = read_text_file(entry.path());
    }
  }
  return r;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace stickcert::store
