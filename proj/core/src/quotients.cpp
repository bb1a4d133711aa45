#include <stickcert/quotients.hpp>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace stickcert::quotients {

Transposition::Transposition(int a, int b) : first(std::min(a, b)), second(std::max(a, b)) {
  if (a == b) throw std::invalid_argument("transposition needs two distinct points");
  if (first < 1) throw std::invalid_argument("transposition points are 1-based");
}

Transposition conjugate(const Transposition& o, const Transposition& t) { return Transposition(o.apply(t.first), o.apply(t.second)); }

std::string to_string(const Transposition& t) { return "(" + std::to_string(t.first) + " " + std::to_string(t.second) + ")"; }

bool transpositions_generate(const std::vector<Transposition>& ts, int n) {
  if (n < 2) return false;
  std::vector<int> parent(n + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& t : ts) {
    if (t.second > n) return false;
    parent[find(t.first)] = find(t.second);
  }
  const int root = find(1);
  for (int p = 2; p <= n; ++p)
    if (find(p) != root) return false;
  return true;
}

Labeling canonical_form(const Labeling& l) {
  // Each candidate is a partial point map that has produced the minimal
  // prefix so far. Only arcs with two unmapped points create ties.
  struct Candidate {
    std::vector<int> image;  // 0 = unmapped
    int next_free = 1;
  };
  std::vector<Candidate> cands{Candidate{std::vector<int>(l.degree + 1, 0), 1}};
  Labeling out{l.degree, {}};
  for (const auto& t : l.arcs) {
    std::vector<std::pair<Transposition, Candidate>> options;
    for (const auto& c : cands) {
      const int ia = c.image[t.first], ib = c.image[t.second];
      if (ia && ib) {
        options.emplace_back(Transposition(ia, ib), c);
      } else if (ia || ib) {
        Candidate next = c;
        next.image[ia ? t.second : t.first] = next.next_free++;
        options.emplace_back(Transposition(ia ? ia : ib, c.next_free), std::move(next));
      } else {
        for (bool flip : {false, true}) {
          Candidate next = c;
          next.image[flip ? t.second : t.first] = c.next_free;
          next.image[flip ? t.first : t.second] = c.next_free + 1;
          next.next_free += 2;
          options.emplace_back(Transposition(c.next_free, c.next_free + 1), std::move(next));
        }
      }
    }
    Transposition best = options.front().first;
    for (const auto& o : options) best = std::min(best, o.first);
    cands.clear();
    for (auto& o : options)
      if (o.first == best) cands.push_back(std::move(o.second));
    out.arcs.push_back(best);
  }
  return out;
}

Verification verify_labeling(const diagram::WirtingerPresentation& pres, const Labeling& labeling, std::string fingerprint) {
  const int n = labeling.degree;
  if (n < 2) return VerificationFailure{"degree must be at least 2"};
  if (static_cast<int>(labeling.arcs.size()) != pres.n_arcs) {
    return VerificationFailure{"labeling covers " + std::to_string(labeling.arcs.size()) + " arcs, presentation has " +
                               std::to_string(pres.n_arcs)};
  }
  for (std::size_t i = 0; i < labeling.arcs.size(); ++i) {
    if (labeling.arcs[i].second > n) return VerificationFailure{"arc " + std::to_string(i) + " label outside S_" + std::to_string(n)};
  }
  HomCertificate cert;
  cert.fingerprint = std::move(fingerprint);
  cert.labeling = labeling;
  cert.bound = n - 1;
  for (const auto& r : pres.relations) {
    const auto& a = labeling.arcs[r.incoming];
    const auto& b = labeling.arcs[r.outgoing];
    const auto& o = labeling.arcs[r.over];
    if (conjugate(o, a) != b) {
      return VerificationFailure{"relation at crossing " + std::to_string(r.crossing) + " fails: " + to_string(o) + " " + to_string(a) +
                                 " " + to_string(o) + " != " + to_string(b)};
    }
    cert.transcript.push_back(RelationCheck{r.crossing, true});
  }
  if (!transpositions_generate(labeling.arcs, n)) {
    return VerificationFailure{"labels do not generate S_" + std::to_string(n) + " (pair graph disconnected or misses a point)"};
  }
  return cert;
}

namespace {

class Searcher {
 public:
  Searcher(const diagram::WirtingerPresentation& pres, int n, std::size_t max_results, SearchStats& stats)
      : pres_(pres), n_(n), max_results_(max_results), stats_(stats) {
    for (int a = 1; a <= n; ++a)
      for (int b = a + 1; b <= n; ++b) values_.emplace_back(a, b);
    const int t = static_cast<int>(values_.size());
    index_.assign((n + 1) * (n + 1), -1);
    for (int i = 0; i < t; ++i) index_[values_[i].first * (n + 1) + values_[i].second] = i;
    conj_.assign(t * t, 0);
    solve_.assign(t * t, -1);
    for (int o = 0; o < t; ++o)
      for (int x = 0; x < t; ++x) {
        int y = index_of(conjugate(values_[o], values_[x]));
        conj_[o * t + x] = y;
        if (x != y) solve_[x * t + y] = o;
      }
    arc_relations_.resize(pres.n_arcs);
    for (std::size_t r = 0; r < pres.relations.size(); ++r) {
      const auto& rel = pres.relations[r];
      std::set<int> members{rel.incoming, rel.outgoing, rel.over};
      for (int a : members) arc_relations_[a].push_back(static_cast<int>(r));
    }
    assignment_.assign(pres.n_arcs, -1);
  }

  std::vector<Labeling> run() {
    if (pres_.n_arcs < n_ - 1) return {};
    dfs();
    return {found_.begin(), found_.end()};
  }

 private:
  int index_of(const Transposition& t) const { return index_[t.first * (n_ + 1) + t.second]; }
  int t_count() const { return static_cast<int>(values_.size()); }

  bool assign(int arc, int value) {
    if (assignment_[arc] >= 0) return assignment_[arc] == value;
    assignment_[arc] = value;
    trail_.push_back(arc);
    queue_.push_back(arc);
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      assignment_[trail_.back()] = -1;
      trail_.pop_back();
    }
  }

  bool propagate() {
    const int t = t_count();
    while (!queue_.empty()) {
      int arc = queue_.back();
      queue_.pop_back();
      for (int r : arc_relations_[arc]) {
        const auto& rel = pres_.relations[r];
        int o = assignment_[rel.over], a = assignment_[rel.incoming], b = assignment_[rel.outgoing];
        if (o >= 0 && a >= 0) {
          if (!assign(rel.outgoing, conj_[o * t + a])) return fail();
        } else if (o >= 0 && b >= 0) {
          if (!assign(rel.incoming, conj_[o * t + b])) return fail();
        } else if (a >= 0 && b >= 0 && a != b) {
          int forced = solve_[a * t + b];
          if (forced < 0 || !assign(rel.over, forced)) return fail();
        }
      }
    }
    return true;
  }

  bool fail() {
    queue_.clear();
    return false;
  }

  int points_used() const {
    int k = 0;
    for (int v : assignment_)
      if (v >= 0) k = std::max(k, values_[v].second);
    return k;
  }

  int choose_arc() const {
    int best = -1, best_known = -1, best_degree = -1;
    for (int arc = 0; arc < pres_.n_arcs; ++arc) {
      if (assignment_[arc] >= 0) continue;
      int known = 0;
      for (int r : arc_relations_[arc]) {
        const auto& rel = pres_.relations[r];
        for (int m : {rel.incoming, rel.outgoing, rel.over})
          if (m != arc && assignment_[m] >= 0) ++known;
      }
      int degree = static_cast<int>(arc_relations_[arc].size());
      if (known > best_known || (known == best_known && degree > best_degree)) {
        best = arc;
        best_known = known;
        best_degree = degree;
      }
    }
    return best;
  }

  bool done() const { return max_results_ > 0 && found_.size() >= max_results_; }

  void dfs() {
    ++stats_.nodes;
    const int arc = choose_arc();
    const int k = points_used();
    if (arc < 0) {
      record(k);
      return;
    }
    int unassigned = 0;
    for (int v : assignment_)
      if (v < 0) ++unassigned;
    if (n_ - k > 2 * unassigned) return;

    // Points above k are interchangeable; only introduce them in order.
    for (int v = 0; v < t_count() && !done(); ++v) {
      const auto& tr = values_[v];
      const bool ok = tr.second <= k || (tr.second == k + 1 && tr.first <= k) || (tr.first == k + 1 && tr.second == k + 2);
      if (!ok) continue;
      const std::size_t mark = trail_.size();
      if (assign(arc, v) && propagate()) dfs();
      queue_.clear();
      undo(mark);
    }
  }

  void record(int k) {
    if (k != n_) return;
    Labeling l{n_, {}};
    for (int v : assignment_) l.arcs.push_back(values_[v]);
    if (!transpositions_generate(l.arcs, n_)) return;
    ++stats_.raw_solutions;
    found_.insert(canonical_form(l));
  }

  const diagram::WirtingerPresentation& pres_;
  const int n_;
  const std::size_t max_results_;
  SearchStats& stats_;
  std::vector<Transposition> values_;
  std::vector<int> index_;
  std::vector<int> conj_;
  std::vector<int> solve_;
  std::vector<std::vector<int>> arc_relations_;
  std::vector<int> assignment_;
  std::vector<int> trail_;
  std::vector<int> queue_;
  std::set<Labeling> found_;
};

}  // namespace

std::vector<Labeling> search_homomorphisms(const diagram::WirtingerPresentation& pres, int n, std::size_t max_results, SearchStats* stats) {
  if (n < 2) throw std::invalid_argument("symmetric group degree must be at least 2");
  SearchStats local;
  Searcher s(pres, n, max_results, stats ? *stats : local);
  return s.run();
}

BridgeBound bridge_lower_bound(const diagram::WirtingerPresentation& pres, int n_max, std::string fingerprint) {
  if (n_max < 3) throw std::invalid_argument("n_max must be at least 3");
  for (int n = n_max; n >= 3; --n) {
    auto found = search_homomorphisms(pres, n, 1);
    if (found.empty()) continue;
    auto v = verify_labeling(pres, found.front(), fingerprint);
    if (auto* cert = std::get_if<HomCertificate>(&v)) return BridgeBound{n - 1, std::move(*cert)};
    throw std::logic_error("search returned a labeling that fails verification: " + std::get<VerificationFailure>(v).reason);
  }
  return BridgeBound{};
}

namespace {

std::string strip(std::string_view s) {
  auto hash = s.find('#');
  if (hash != std::string_view::npos) s = s.substr(0, hash);
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Parses "arc <i> -> (<a> <b>)".
std::pair<int, Transposition> parse_arc_line(const std::string& line, int line_no) {
  int idx = 0, a = 0, b = 0;
  char open = 0, close = 0;
  std::string kw, arrow;
  std::istringstream ls(line);
  if (!(ls >> kw >> idx >> arrow >> open >> a >> b >> close) || kw != "arc" || arrow != "->" || open != '(' || close != ')') {
    throw ParseError("expected 'arc <i> -> (<a> <b>)'", line_no);
  }
  std::string rest;
  if (ls >> rest) throw ParseError("trailing text after arc label", line_no);
  if (a == b || a < 1 || b < 1) throw ParseError("invalid transposition", line_no);
  return {idx, Transposition(a, b)};
}

}  // namespace

Labeling parse_labeling(std::string_view text, int degree) {
  Labeling l{degree, {}};
  std::vector<std::optional<Transposition>> slots;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = strip(raw);
    if (line.empty()) continue;
    if (line.rfind("degree", 0) == 0) {
      std::istringstream ls(line.substr(6));
      if (!(ls >> l.degree)) throw ParseError("expected 'degree <n>'", line_no);
      continue;
    }
    auto [idx, t] = parse_arc_line(line, line_no);
    if (idx < 0) throw ParseError("negative arc index", line_no);
    if (static_cast<std::size_t>(idx) >= slots.size()) slots.resize(idx + 1);
    if (slots[idx]) throw ParseError("arc " + std::to_string(idx) + " labeled twice", line_no);
    slots[idx] = t;
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i]) throw ParseError("arc " + std::to_string(i) + " has no label");
    l.arcs.push_back(*slots[i]);
  }
  if (l.degree < 2) throw ParseError("labeling degree must be at least 2");
  return l;
}

std::string format_labeling(const Labeling& l) {
  std::string out = "degree " + std::to_string(l.degree) + "\n";
  for (std::size_t i = 0; i < l.arcs.size(); ++i) out += "arc " + std::to_string(i) + " -> " + to_string(l.arcs[i]) + "\n";
  return out;
}

std::string format_certificate(const HomCertificate& cert) {
  std::string out = "certificate fingerprint=" + (cert.fingerprint.empty() ? std::string("none") : cert.fingerprint) +
                    " degree=" + std::to_string(cert.labeling.degree) + " bound=" + std::to_string(cert.bound) + "\n";
  for (std::size_t i = 0; i < cert.labeling.arcs.size(); ++i)
    out += "arc " + std::to_string(i) + " -> " + to_string(cert.labeling.arcs[i]) + "\n";
  for (const auto& r : cert.transcript) out += "relation " + std::to_string(r.relation) + ": " + (r.pass ? "PASS" : "FAIL") + "\n";
  return out;
}

HomCertificate parse_certificate(std::string_view text) {
  HomCertificate cert;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = strip(raw);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "certificate") {
      for (std::string field; ls >> field;) {
        auto eq = field.find('=');
        if (eq == std::string::npos) throw ParseError("malformed header field '" + field + "'", line_no);
        auto key = field.substr(0, eq), val = field.substr(eq + 1);
        if (key == "fingerprint") {
          cert.fingerprint = val == "none" ? "" : val;
        } else if (key == "degree") {
          cert.labeling.degree = std::stoi(val);
        } else if (key == "bound") {
          cert.bound = std::stoi(val);
        } else {
          throw ParseError("unknown header field '" + key + "'", line_no);
        }
      }
      header = true;
    } else if (kw == "arc") {
      auto [idx, t] = parse_arc_line(line, line_no);
      if (idx != static_cast<int>(cert.labeling.arcs.size())) throw ParseError("arcs must be listed in order", line_no);
      cert.labeling.arcs.push_back(t);
    } else if (kw == "relation") {
      int id = 0;
      char colon = 0;
      std::string verdict;
      if (!(ls >> id >> colon >> verdict) || colon != ':' || (verdict != "PASS" && verdict != "FAIL")) {
        throw ParseError("expected 'relation <j>: PASS|FAIL'", line_no);
      }
      cert.transcript.push_back(RelationCheck{id, verdict == "PASS"});
    } else {
      throw ParseError("unknown certificate line '" + kw + "'", line_no);
    }
  }
  if (!header) throw ParseError("missing certificate header");
  return cert;
}

}  // namespace stickcert::quotients
