#include <stickcert/diagram.hpp>

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <sstream>

namespace stickcert::diagram {

namespace {

struct Occurrence {
  std::size_t crossing;
  int slot;
};

bool is_incoming(const Crossing& x, int slot) { return slot == 0 || slot == x.over_in_slot(); }

int exit_slot(const Crossing& x, int in_slot) { return in_slot == 0 ? 2 : x.over_out_slot(); }

// label -> (incoming occurrence, outgoing occurrence). Assumes every label
// occurs once in each role; callers validate first.
struct EdgeIndex {
  std::map<int, Occurrence> head;
  std::map<int, Occurrence> tail;
};

EdgeIndex index_edges(const std::vector<Crossing>& cs) {
  EdgeIndex idx;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (int s = 0; s < 4; ++s) {
      auto& target = is_incoming(cs[i], s) ? idx.head : idx.tail;
      target[cs[i].slots[s]] = Occurrence{i, s};
    }
  }
  return idx;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return trim(hash == std::string_view::npos ? line : line.substr(0, hash));
}

int parse_int(std::string_view tok, int line) {
  int v = 0;
  auto t = trim(tok);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ParseError("expected integer, got '" + std::string(tok) + "'", line);
  }
  return v;
}

}  // namespace

std::optional<std::size_t> Diagram::find(int id) const {
  for (std::size_t i = 0; i < crossings_.size(); ++i) {
    if (crossings_[i].id == id) return i;
  }
  return std::nullopt;
}

int Diagram::writhe() const {
  int w = 0;
  for (const auto& x : crossings_) w += x.sign;
  return w;
}

std::optional<std::string> validate(const Diagram& d) {
  const auto& cs = d.crossings();
  const int c = d.n_crossings();
  if (c == 0) return std::nullopt;
  const int labels = 2 * c;

  std::set<int> ids;
  std::vector<int> seen(labels + 1, 0), in_count(labels + 1, 0);
  for (const auto& x : cs) {
    const std::string where = "crossing " + std::to_string(x.id);
    if (!ids.insert(x.id).second) return "duplicate crossing id " + std::to_string(x.id);
    if (x.sign != 1 && x.sign != -1) return where + ": sign must be +1 or -1";
    for (int s = 0; s < 4; ++s) {
      int e = x.slots[s];
      if (e < 1 || e > labels) return where + ": edge label " + std::to_string(e) + " out of range 1.." + std::to_string(labels);
      if (++seen[e] > 2) return where + ": edge label " + std::to_string(e) + " used more than twice";
      if (is_incoming(x, s)) ++in_count[e];
    }
  }
  for (int e = 1; e <= labels; ++e) {
    if (seen[e] != 2) return "edge label " + std::to_string(e) + " appears " + std::to_string(seen[e]) + " times";
    if (in_count[e] != 1) return "edge label " + std::to_string(e) + " is not oriented consistently";
  }
  auto succ = [labels](int e) { return e % labels + 1; };
  for (const auto& x : cs) {
    if (x.under_out() != succ(x.under_in()) || x.over_out() != succ(x.over_in())) {
      return "crossing " + std::to_string(x.id) + ": sign inconsistent with edge orientation";
    }
  }

  auto idx = index_edges(cs);
  int steps = 0;
  int e = 1;
  do {
    auto [ci, slot] = idx.head.at(e);
    e = cs[ci].slots[exit_slot(cs[ci], slot)];
    ++steps;
  } while (e != 1 && steps <= labels);
  if (steps != labels) return "traversal from edge 1 closes after " + std::to_string(steps) + " of " + std::to_string(labels) + " edges";

  // Planarity: orbits of (rotate ccw) o (edge involution) are the faces.
  std::map<int, std::vector<Occurrence>> occ;
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (int s = 0; s < 4; ++s) occ[cs[i].slots[s]].push_back({i, s});
  auto partner = [&](Occurrence h) {
    const auto& v = occ[cs[h.crossing].slots[h.slot]];
    return (v[0].crossing == h.crossing && v[0].slot == h.slot) ? v[1] : v[0];
  };
  std::vector<std::array<bool, 4>> visited(cs.size(), {false, false, false, false});
  int faces = 0;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (int s = 0; s < 4; ++s) {
      if (visited[i][s]) continue;
      ++faces;
      Occurrence h{i, s};
      while (!visited[h.crossing][h.slot]) {
        visited[h.crossing][h.slot] = true;
        auto p = partner(h);
        h = Occurrence{p.crossing, (p.slot + 1) % 4};
      }
    }
  }
  if (faces != c + 2) return "diagram is not planar (" + std::to_string(faces) + " faces, expected " + std::to_string(c + 2) + ")";
  return std::nullopt;
}

void require_valid(const Diagram& d) {
  if (auto defect = validate(d)) throw DiagramError(*defect);
}

std::vector<GaussEntry> gauss_code(const Diagram& d) {
  require_valid(d);
  const auto& cs = d.crossings();
  auto idx = index_edges(cs);
  std::vector<GaussEntry> code;
  for (int e = 1; e <= 2 * d.n_crossings(); ++e) {
    auto [ci, slot] = idx.head.at(e);
    code.push_back(GaussEntry{cs[ci].id, slot != 0, cs[ci].sign});
  }
  return code;
}

Diagram from_gauss_code(const std::vector<GaussEntry>& code) {
  if (code.empty()) return Diagram{};
  if (code.size() % 2 != 0) throw DiagramError("Gauss code has odd length");
  const int labels = static_cast<int>(code.size());
  struct Partial {
    int sign = 0;
    int under_in = 0, under_out = 0, over_in = 0, over_out = 0;
  };
  std::map<int, Partial> parts;
  for (int k = 0; k < labels; ++k) {
    const auto& g = code[k];
    auto& p = parts[g.crossing];
    if (p.sign != 0 && p.sign != g.sign) throw DiagramError("crossing " + std::to_string(g.crossing) + " has inconsistent signs");
    p.sign = g.sign;
    int in = k + 1;
    int out = (k + 1) % labels + 1;
    if (g.over) {
      if (p.over_in != 0) throw DiagramError("crossing " + std::to_string(g.crossing) + " passed over twice");
      p.over_in = in;
      p.over_out = out;
    } else {
      if (p.under_in != 0) throw DiagramError("crossing " + std::to_string(g.crossing) + " passed under twice");
      p.under_in = in;
      p.under_out = out;
    }
  }
  std::vector<Crossing> cs;
  for (const auto& [id, p] : parts) {
    if (p.over_in == 0 || p.under_in == 0) throw DiagramError("crossing " + std::to_string(id) + " visited only once");
    Crossing x{id, {}, p.sign};
    x.slots = p.sign > 0 ? std::array<int, 4>{p.under_in, p.over_out, p.under_out, p.over_in}
                         : std::array<int, 4>{p.under_in, p.over_in, p.under_out, p.over_out};
    cs.push_back(x);
  }
  return Diagram(std::move(cs));
}

std::string format_gauss_code(const std::vector<GaussEntry>& code) {
  std::string out;
  for (const auto& g : code) {
    if (!out.empty()) out += ' ';
    out += (g.over ? 'O' : 'U');
    out += std::to_string(g.crossing);
    out += (g.sign > 0 ? '+' : '-');
  }
  return out;
}

WirtingerPresentation wirtinger(const Diagram& d) {
  require_valid(d);
  WirtingerPresentation p;
  const int labels = 2 * d.n_crossings();
  if (labels == 0) return p;

  const auto& cs = d.crossings();
  auto idx = index_edges(cs);
  std::vector<int> arc(labels + 1, 0);
  int current = 0;
  arc[1] = 0;
  for (int e = 1; e < labels; ++e) {
    if (idx.head.at(e).slot == 0) ++current;
    arc[e + 1] = current;
  }
  // The run after the last under-pass continues into edge 1 unless that
  // under-pass is exactly at the head of the final edge.
  if (idx.head.at(labels).slot != 0) {
    const int wrap = current;
    for (int e = 1; e <= labels; ++e)
      if (arc[e] == wrap) arc[e] = 0;
    p.n_arcs = current;
  } else {
    p.n_arcs = current + 1;
  }

  for (const auto& x : cs) {
    p.relations.push_back(WirtingerRelation{x.id, arc[x.under_in()], arc[x.under_out()], arc[x.over_in()], x.sign});
  }
  p.arc_of_edge = std::move(arc);
  return p;
}

std::string format_presentation(const WirtingerPresentation& p) {
  std::ostringstream os;
  os << "arcs " << p.n_arcs << '\n';
  for (const auto& r : p.relations) {
    os << "rel " << r.outgoing << ' ' << r.over << ' ' << r.incoming << ' ' << (r.sign > 0 ? "+1" : "-1") << '\n';
  }
  return os.str();
}

WirtingerPresentation parse_presentation(std::string_view text) {
  WirtingerPresentation p;
  bool have_arcs = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  int rel_id = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = strip_comment(raw);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (kw == "arcs") {
      if (toks.size() != 1) throw ParseError("arcs takes one argument", line_no);
      p.n_arcs = parse_int(toks[0], line_no);
      if (p.n_arcs < 1) throw ParseError("arc count must be positive", line_no);
      have_arcs = true;
    } else if (kw == "rel") {
      if (!have_arcs) throw ParseError("rel before arcs", line_no);
      if (toks.size() != 4) throw ParseError("rel takes <outgoing> <over> <incoming> <sign>", line_no);
      WirtingerRelation r;
      r.crossing = ++rel_id;
      r.outgoing = parse_int(toks[0], line_no);
      r.over = parse_int(toks[1], line_no);
      r.incoming = parse_int(toks[2], line_no);
      r.sign = parse_int(toks[3].size() > 1 && toks[3][0] == '+' ? toks[3].substr(1) : toks[3], line_no);
      for (int a : {r.outgoing, r.over, r.incoming})
        if (a < 0 || a >= p.n_arcs) throw ParseError("arc index out of range", line_no);
      if (r.sign != 1 && r.sign != -1) throw ParseError("sign must be +1 or -1", line_no);
      p.relations.push_back(r);
    } else {
      throw ParseError("unknown keyword '" + kw + "'", line_no);
    }
  }
  if (!have_arcs) throw ParseError("missing arcs line");
  return p;
}

Diagram change_crossings(const Diagram& d, const CrossingChangeSet& ids) {
  for (int id : ids)
    if (!d.find(id)) throw DiagramError("unknown crossing id " + std::to_string(id));
  std::vector<Crossing> cs = d.crossings();
  for (auto& x : cs) {
    if (!ids.contains(x.id)) continue;
    const auto [a, b, c, e] = x.slots;
    // The old over-strand becomes the under-strand; rotate so it is listed first.
    x.slots = x.sign > 0 ? std::array<int, 4>{e, a, b, c} : std::array<int, 4>{b, c, e, a};
    x.sign = -x.sign;
  }
  return Diagram(std::move(cs));
}

Diagram mirror(const Diagram& d) {
  CrossingChangeSet all;
  for (const auto& x : d.crossings()) all.insert(x.id);
  return change_crossings(d, all);
}

Diagram relabel(const Diagram& d) {
  std::vector<Crossing> cs = d.crossings();
  if (cs.empty()) return Diagram{};
  std::sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  auto idx = index_edges(cs);
  const std::size_t total = idx.head.size();
  if (total != 2 * cs.size() || idx.tail.size() != total) throw DiagramError("relabel: inconsistent edge structure");

  std::map<int, int> fresh;
  const int start = idx.head.begin()->first;
  int e = start;
  do {
    fresh[e] = static_cast<int>(fresh.size()) + 1;
    auto [ci, slot] = idx.head.at(e);
    e = cs[ci].slots[exit_slot(cs[ci], slot)];
  } while (e != start && fresh.size() <= total);
  if (fresh.size() != total) throw DiagramError("relabel: diagram has more than one component");
  for (auto& x : cs)
    for (auto& s : x.slots) s = fresh.at(s);
  return Diagram(std::move(cs));
}

namespace {

class LabelUnion {
 public:
  int find(int x) {
    auto it = parent_.find(x);
    if (it == parent_.end() || it->second == x) return x;
    int r = find(it->second);
    parent_[x] = r;
    return r;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::map<int, int> parent_;
};

void apply_union(std::vector<Crossing>& cs, LabelUnion& u) {
  for (auto& x : cs)
    for (auto& s : x.slots) s = u.find(s);
}

bool remove_kink(std::vector<Crossing>& cs) {
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto& s = cs[i].slots;
    for (int k = 0; k < 4; ++k) {
      if (s[k] != s[(k + 1) % 4]) continue;
      const int x = s[(k + 2) % 4];
      const int y = s[(k + 3) % 4];
      cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(i));
      LabelUnion u;
      u.unite(x, y);
      apply_union(cs, u);
      return true;
    }
  }
  return false;
}

bool remove_bigon(std::vector<Crossing>& cs) {
  std::map<int, std::vector<Occurrence>> occ;
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (int s = 0; s < 4; ++s) occ[cs[i].slots[s]].push_back({i, s});
  auto partner = [&](Occurrence h) {
    const auto& v = occ[cs[h.crossing].slots[h.slot]];
    return (v[0].crossing == h.crossing && v[0].slot == h.slot) ? v[1] : v[0];
  };
  auto face_next = [&](Occurrence h) {
    auto p = partner(h);
    return Occurrence{p.crossing, (p.slot + 1) % 4};
  };

  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (int s = 0; s < 4; ++s) {
      Occurrence h1{i, s};
      Occurrence h2 = face_next(h1);
      Occurrence back = face_next(h2);
      if (back.crossing != h1.crossing || back.slot != h1.slot || h2.crossing == h1.crossing) continue;
      // Bigon edges: the edge at h1 and the edge at h2.
      Occurrence e1_far = partner(h1);
      Occurrence e2_far = partner(h2);
      const bool e1_over_near = h1.slot % 2 == 1, e1_over_far = e1_far.slot % 2 == 1;
      const bool e2_over_near = h2.slot % 2 == 1, e2_over_far = e2_far.slot % 2 == 1;
      if (e1_over_near != e1_over_far || e2_over_near != e2_over_far || e1_over_near == e2_over_near) continue;

      const std::size_t ca = h1.crossing, cb = h2.crossing;
      // At each crossing the strand continues through the opposite slot.
      auto opposite = [&](std::size_t ci, int slot) { return cs[ci].slots[(slot + 2) % 4]; };
      LabelUnion u;
      u.unite(opposite(h1.crossing, h1.slot), opposite(e1_far.crossing, e1_far.slot));
      u.unite(opposite(h2.crossing, h2.slot), opposite(e2_far.crossing, e2_far.slot));
      std::vector<Crossing> rest;
      for (std::size_t k = 0; k < cs.size(); ++k)
        if (k != ca && k != cb) rest.push_back(cs[k]);
      apply_union(rest, u);
      cs = std::move(rest);
      return true;
    }
  }
  return false;
}

}  // namespace

Diagram simplify(const Diagram& d) {
  require_valid(d);
  std::vector<Crossing> cs = d.crossings();
  while (!cs.empty() && (remove_kink(cs) || remove_bigon(cs))) {
  }
  if (cs.empty()) return Diagram{};
  std::sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < cs.size(); ++i) cs[i].id = static_cast<int>(i) + 1;
  return relabel(Diagram(std::move(cs)));
}

Diagram parse_pd(std::string_view text) {
  struct Row {
    std::array<int, 4> s;
    int line;
  };
  std::vector<Row> rows;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = strip_comment(raw);
    if (line.empty()) continue;
    if (line[0] != 'X') throw ParseError("expected 'X a,b,c,d'", line_no);
    std::string body = trim(std::string_view(line).substr(1));
    if (!body.empty() && body.front() == '[' && body.back() == ']') body = body.substr(1, body.size() - 2);
    std::vector<int> vals;
    std::size_t pos = 0;
    while (pos <= body.size()) {
      auto comma = body.find(',', pos);
      auto tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      vals.push_back(parse_int(tok, line_no));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (vals.size() != 4) throw ParseError("crossing needs exactly 4 edge labels", line_no);
    rows.push_back(Row{{vals[0], vals[1], vals[2], vals[3]}, line_no});
  }

  const int labels = 2 * static_cast<int>(rows.size());
  auto succ = [labels](int e) { return e % labels + 1; };
  std::vector<Crossing> cs;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto [a, b, c, e] = rows[i].s;
    int sign = 0;
    // Labels shared with the under-strand fix the over direction outright.
    if (b == c || e == a) {
      sign = -1;
    } else if (e == c || b == a) {
      sign = 1;
    } else if (succ(e) == b && succ(b) != e) {
      sign = 1;
    } else if (succ(b) == e && succ(e) != b) {
      sign = -1;
    } else {
      throw ParseError("cannot orient over-strand: labels " + std::to_string(b) + " and " + std::to_string(e) + " are not consecutive", rows[i].line);
    }
    cs.push_back(Crossing{static_cast<int>(i) + 1, rows[i].s, sign});
  }
  return Diagram(std::move(cs));
}

std::string format_pd(const Diagram& d) {
  std::string out;
  for (const auto& x : d.crossings()) {
    out += "X " + std::to_string(x.slots[0]) + ',' + std::to_string(x.slots[1]) + ',' + std::to_string(x.slots[2]) + ',' +
           std::to_string(x.slots[3]) + '\n';
  }
  return out;
}

std::string fingerprint(const Diagram& d) {
  const std::string text = format_pd(d);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

}  // namespace stickcert::diagram
