#include "cli.hpp"

#include <stickcert/store.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace stickcert::cli {

namespace fs = std::filesystem;

namespace {

std::string vec_text(const geom::Point3& p) { return "(" + p.x.str() + ", " + p.y.str() + ", " + p.z.str() + ")"; }
std::string vec_csv(const geom::Point3& p) { return p.x.str() + "," + p.y.str() + "," + p.z.str(); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string indent(const std::string& text, const std::string& pad = "  ") {
  std::string out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out += pad + line + '\n';
  return out;
}

void emit(const std::string& text, const Options& opts, std::ostream& out) {
  if (!opts.output) {
    out << text;
    return;
  }
  std::ofstream f(*opts.output, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot write " + opts.output->string());
  f << text;
}

diagram::Diagram read_pd_file(const fs::path& path) {
  auto d = diagram::parse_pd(store::read_text_file(path));
  diagram::require_valid(d);
  return d;
}

std::string search_summary(const quotients::BridgeBound& b, int degree_max) {
  if (b.certificate) {
    const int n = b.certificate->labeling.degree;
    return "S_" + std::to_string(n) + " surjection found (bridge >= " + std::to_string(b.bound) + ")";
  }
  return "no transposition surjection onto S_n for 3 <= n <= " + std::to_string(degree_max);
}

// Maps exceptions to exit codes; everything below main goes through here.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const DiagramError& e) {
    err << "invalid diagram: " << e.what() << '\n';
    return kParse;
  } catch (const GeometryError& e) {
    err << "geometry error: " << e.what() << '\n';
    return kGeometry;
  } catch (const certify::ContradictionError& e) {
    err << e.what() << '\n' << certify::report(e.facts());
    return kContradiction;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace

void validate(const Options& opts) {
  if (opts.samples < 1) throw UsageError("--samples must be at least 1");
  if (opts.degree_max < 3) throw UsageError("--degree-max must be at least 3");
  if (opts.degree && *opts.degree < 3) throw UsageError("--degree must be at least 3");
  if (opts.tol <= 0) throw UsageError("--tol must be positive");
  if (opts.crossing_cap < 0) throw UsageError("--crossing-cap must be non-negative");
  for (int id : opts.crossings)
    if (id < 1) throw UsageError("crossing ids are positive integers");
}

Rational parse_decimal(const std::string& text) {
  const auto bad = [&] { return UsageError("not a number: '" + text + "'"); };
  const auto slash = text.find('/');
  auto parse_int = [&](const std::string& s) {
    if (s.empty()) throw bad();
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw bad();
    for (std::size_t j = i; j < s.size(); ++j)
      if (!std::isdigit(static_cast<unsigned char>(s[j]))) throw bad();
    return BigInt(s[0] == '+' ? s.substr(1) : s);
  };
  if (slash != std::string::npos) {
    const BigInt den = parse_int(text.substr(slash + 1));
    if (den.is_zero()) throw bad();
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  std::string mant = text;
  long exp = 0;
  const auto e = text.find_first_of("eE");
  if (e != std::string::npos) {
    mant = text.substr(0, e);
    const BigInt ex = parse_int(text.substr(e + 1));
    if (ex > 1000 || ex < -1000) throw bad();
    exp = ex.convert_to<long>();
  }
  const auto dot = mant.find('.');
  if (dot != std::string::npos) {
    const std::string frac = mant.substr(dot + 1);
    mant = mant.substr(0, dot) + frac;
    exp -= static_cast<long>(frac.size());
    if (mant == "-" || mant == "+" || mant.empty()) throw bad();
  }
  Rational v(parse_int(mant));
  const BigInt p = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exp < 0 ? -exp : exp));
  if (exp < 0) return Rational(v / p);
  return Rational(v * p);
}

std::vector<int> parse_id_list(const std::string& text) {
  std::vector<int> ids;
  std::string tok;
  std::istringstream in(text);
  while (std::getline(in, tok, ',')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), [](unsigned char c) { return std::isspace(c); }), tok.end());
    if (tok.empty()) continue;
    if (!std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); }) || tok.size() > 9)
      throw UsageError("bad crossing id '" + tok + "'");
    ids.push_back(std::stoi(tok));
  }
  return ids;
}

Analysis analyze_polygon(const geom::Polygon3& poly, const Options& opts) {
  Analysis a(poly);
  a.equilateral = geom::check_equilateral(poly, opts.tol);
  a.direction = geom::find_regular_direction(poly, opts.seed).first;
  a.projected = geom::project_to_diagram(poly, a.direction);
  a.simplified = diagram::simplify(a.projected);
  a.alexander = invariants::alexander(a.simplified);
  a.determinant = invariants::determinant(a.simplified);
  a.colorings3 = invariants::count_colorings(a.simplified, 3);
  a.bracket = invariants::kauffman_bracket(a.simplified, opts.crossing_cap);
  const auto pres = diagram::wirtinger(a.simplified);
  a.bridge = quotients::bridge_lower_bound(pres, opts.degree_max, diagram::fingerprint(a.simplified));
  // A surjection onto S_n with n >= 3 has non-abelian image, so it also rules out the unknot.
  a.nontrivial = a.alexander != invariants::LaurentPoly(1) || a.colorings3.count > 3 || a.bridge.certificate.has_value();
  auto facts = certify::make_facts(poly.name(), a.nontrivial);
  facts = certify::add_stick_witness(std::move(facts), poly);
  if (a.bridge.certificate) facts = certify::add_hom_certificate(std::move(facts), *a.bridge.certificate);
  a.facts = certify::saturate(std::move(facts));
  return a;
}

std::string conclusion(const certify::KnotFacts& f) {
  std::string out;
  const std::pair<const char*, const certify::Interval*> parts[] = {
      {"bridge", &f.bridge}, {"sb", &f.superbridge}, {"stick", &f.stick}};
  for (const auto& [name, iv] : parts) {
    if (!out.empty()) out += ' ';
    out += std::string(name) + '=';
    if (iv->exact()) {
      out += std::to_string(iv->lo);
    } else {
      out += "[" + std::to_string(iv->lo) + "," + (iv->hi ? std::to_string(*iv->hi) : "inf") + "]";
    }
  }
  return out;
}

std::string batch_row(const Analysis& a) {
  return a.polygon.name() + '\t' + std::to_string(a.polygon.size()) + '\t' + (a.equilateral.equilateral ? "yes" : "no") + '\t' +
         std::to_string(a.simplified.n_crossings()) + '\t' + std::to_string(a.bridge.bound) + '\t' + conclusion(a.facts) + '\n';
}

std::string render_analysis(const Analysis& a, const Options& opts) {
  std::ostringstream os;
  const std::string fp = diagram::fingerprint(a.simplified);
  if (opts.machine) {
    os << "POLYGON " << (a.polygon.name().empty() ? "-" : a.polygon.name()) << " vertices=" << a.polygon.size()
       << " equilateral=" << (a.equilateral.equilateral ? "yes" : "no") << " max_rel_dev=" << sci(a.equilateral.max_rel_deviation) << '\n';
    os << "DIRECTION " << vec_csv(a.direction.d()) << '\n';
    os << "DIAGRAM projected=" << a.projected.n_crossings() << " simplified=" << a.simplified.n_crossings() << " fingerprint=" << fp << '\n';
    os << "ALEXANDER " << invariants::to_string(a.alexander) << '\n';
    os << "DETERMINANT " << a.determinant << '\n';
    os << "COLORINGS3 " << a.colorings3.count << '\n';
    os << "BRACKET " << (a.bracket ? invariants::to_string(*a.bracket, 'A') : "skipped") << '\n';
    if (a.bridge.certificate) {
      os << "HOM degree=" << a.bridge.certificate->labeling.degree << " bound=" << a.bridge.bound << '\n';
    } else {
      os << "HOM none degree_max=" << opts.degree_max << '\n';
    }
    os << certify::machine_report(a.facts);
    return os.str();
  }
  os << "knot: " << (a.polygon.name().empty() ? "(unnamed)" : a.polygon.name()) << '\n';
  os << "sticks: " << a.polygon.size() << '\n';
  os << "equilateral: " << (a.equilateral.equilateral ? "yes" : "no") << " (max relative deviation "
     << sci(a.equilateral.max_rel_deviation) << ", tolerance " << sci(opts.tol.convert_to<double>()) << ")\n";
  os << "projection direction: " << vec_text(a.direction.d()) << '\n';
  os << "diagram: " << a.projected.n_crossings() << " crossings as projected, " << a.simplified.n_crossings()
     << " after simplification\n";
  os << "fingerprint: " << fp << '\n';
  os << "alexander: " << invariants::to_string(a.alexander) << '\n';
  os << "determinant: " << a.determinant << '\n';
  os << "3-colorings: " << a.colorings3.count << '\n';
  if (a.bracket) {
    os << "kauffman bracket: " << invariants::to_string(*a.bracket, 'A') << '\n';
  } else {
    os << "kauffman bracket: skipped (" << a.simplified.n_crossings() << " crossings exceed cap " << opts.crossing_cap << ")\n";
  }
  os << "homomorphism search: " << search_summary(a.bridge, opts.degree_max) << '\n';
  if (a.bridge.certificate) os << "certificate:\n" << indent(quotients::format_certificate(*a.bridge.certificate));
  os << '\n' << certify::report(a.facts);
  return os.str();
}

int cmd_analyze(const fs::path& coords, const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(opts);
    const auto poly = store::read_coordinate_file(coords);
    const auto a = analyze_polygon(poly, opts);
    emit(render_analysis(a, opts), opts, out);
    if (opts.catalog) {
      auto rec = store::make_record(poly.name(), poly, a.simplified);
      rec.invariants["alexander"] = invariants::to_string(a.alexander);
      rec.invariants["determinant"] = a.determinant.str();
      rec.invariants["colorings3"] = a.colorings3.count.str();
      rec.invariants["conclusion"] = conclusion(a.facts);
      if (a.bridge.certificate)
        rec.certificates["S" + std::to_string(a.bridge.certificate->labeling.degree)] = quotients::format_certificate(*a.bridge.certificate);
      rec.updated = store::utc_timestamp();
      rec.created = rec.updated;
      try {
        rec.created = store::catalog_get(*opts.catalog, poly.name()).created;
      } catch (const store::MissingRecordError&) {
      }
      store::catalog_put(*opts.catalog, rec);
    }
    return int(kOk);
  });
}

int cmd_sweep(const fs::path& coords, const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(opts);
    const auto poly = store::read_coordinate_file(coords);
    const auto r = geom::direction_sweep(poly, opts.samples, opts.seed);
    std::ostringstream os;
    if (opts.machine) {
      os << "SWEEP " << (poly.name().empty() ? "-" : poly.name()) << " samples=" << opts.samples << " seed=" << opts.seed
         << " min=" << r.min_count << " max=" << r.max_count << " min_dir=" << vec_csv(r.min_witness.d())
         << " max_dir=" << vec_csv(r.max_witness.d()) << '\n';
    } else {
      os << "knot: " << (poly.name().empty() ? "(unnamed)" : poly.name()) << '\n';
      os << "samples: " << opts.samples << ", seed: " << opts.seed << '\n';
      os << "min local maxima: " << r.min_count << " at direction " << vec_text(r.min_witness.d()) << '\n';
      os << "max local maxima: " << r.max_count << " at direction " << vec_text(r.max_witness.d()) << '\n';
      os << "sticks: " << poly.size() << " (so at most " << poly.size() / 2 << " maxima)\n";
    }
    emit(os.str(), opts, out);
    return int(kOk);
  });
}

int cmd_change(const fs::path& pd, const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(opts);
    const auto d = read_pd_file(pd);
    diagram::CrossingChangeSet ids(opts.crossings.begin(), opts.crossings.end());
    for (int id : ids)
      if (!d.find(id)) throw UsageError("no crossing with id " + std::to_string(id));
    const auto changed = diagram::change_crossings(d, ids);
    const std::string pd_text = diagram::format_pd(changed);
    const auto bound = quotients::bridge_lower_bound(diagram::wirtinger(changed), opts.degree_max, diagram::fingerprint(changed));
    std::ostringstream os;
    std::string list;
    for (int id : ids) list += (list.empty() ? "" : ",") + std::to_string(id);
    if (opts.machine) {
      os << "CHANGE crossings=" << (list.empty() ? "-" : list) << " fingerprint=" << diagram::fingerprint(changed) << '\n';
      os << "ALEXANDER " << invariants::to_string(invariants::alexander(changed)) << '\n';
      if (bound.certificate) {
        os << "HOM degree=" << bound.certificate->labeling.degree << " bound=" << bound.bound << '\n';
      } else {
        os << "HOM none degree_max=" << opts.degree_max << '\n';
      }
    } else {
      os << "changed crossings: " << (list.empty() ? "(none)" : list) << '\n';
      os << "crossings: " << changed.n_crossings() << '\n';
      os << "fingerprint: " << diagram::fingerprint(changed) << '\n';
      os << "alexander: " << invariants::to_string(invariants::alexander(changed)) << '\n';
      if (!opts.output) os << "pd:\n" << indent(pd_text);
      os << "homomorphism search: " << search_summary(bound, opts.degree_max) << '\n';
      if (bound.certificate) os << "certificate:\n" << indent(quotients::format_certificate(*bound.certificate));
    }
    if (opts.output) {
      std::ofstream f(*opts.output, std::ios::binary | std::ios::trunc);
      if (!f) throw UsageError("cannot write " + opts.output->string());
      f << pd_text;
    }
    out << os.str();
    return int(kOk);
  });
}

int cmd_batch(const fs::path& dir, const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(opts);
    if (!fs::is_directory(dir)) throw UsageError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.is_regular_file() && entry.path().extension() == ".tsv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::string table = "name\tsticks\tequilateral\tcrossings\tbridge_lower\tconclusion\n";
    int status = kOk;
    for (const auto& f : files) {
      std::ostringstream diag;
      std::string row;
      const int rc = guarded(diag, [&] {
        row = batch_row(analyze_polygon(store::read_coordinate_file(f), opts));
        return int(kOk);
      });
      if (rc == kOk) {
        table += row;
      } else {
        std::string msg = diag.str();
        msg = msg.substr(0, msg.find('\n'));
        table += "error\t" + f.filename().string() + '\t' + msg + '\n';
        err << f.filename().string() << ": " << diag.str();
        if (status == kOk) status = rc;
      }
    }
    emit(table, opts, out);
    return status;
  });
}

int cmd_homsearch(const fs::path& input, const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(opts);
    const std::string text = store::read_text_file(input);
    std::string fp;
    diagram::WirtingerPresentation pres;
    if (opts.pd_input) {
      auto d = diagram::parse_pd(text);
      diagram::require_valid(d);
      fp = diagram::fingerprint(d);
      pres = diagram::wirtinger(d);
    } else {
      pres = diagram::parse_presentation(text);
    }
    std::ostringstream os;
    if (opts.degree) {
      quotients::SearchStats stats;
      const auto found = quotients::search_homomorphisms(pres, *opts.degree, opts.max_results, &stats);
      os << "degree " << *opts.degree << ": " << found.size() << " conjugacy class" << (found.size() == 1 ? "" : "es")
         << " of surjections (" << stats.nodes << " search nodes)\n";
      for (std::size_t i = 0; i < found.size(); ++i) os << "class " << i + 1 << '\n' << indent(quotients::format_labeling(found[i]));
    } else {
      const auto bound = quotients::bridge_lower_bound(pres, opts.degree_max, fp);
      os << search_summary(bound, opts.degree_max) << '\n';
      if (bound.certificate) os << quotients::format_certificate(*bound.certificate);
    }
    emit(os.str(), opts, out);
    return int(kOk);
  });
}

int cmd_invariants(const fs::path& pd, const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(opts);
    const auto d = read_pd_file(pd);
    const auto s = diagram::simplify(d);
    const auto bracket = invariants::kauffman_bracket(d, opts.crossing_cap);
    std::ostringstream os;
    auto line = [&](std::string key, const std::string& value) {
      if (!opts.machine) {
        os << key << ": " << value << '\n';
        return;
      }
      for (char& c : key) c = (c == ' ' || c == '-') ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      os << key << ' ' << value << '\n';
    };
    line("crossings", std::to_string(d.n_crossings()));
    line("writhe", std::to_string(d.writhe()));
    line("simplified crossings", std::to_string(s.n_crossings()));
    line("fingerprint", diagram::fingerprint(d));
    line("gauss code", diagram::format_gauss_code(diagram::gauss_code(d)));
    line("alexander", invariants::to_string(invariants::alexander(d)));
    line("determinant", invariants::determinant(d).str());
    for (int p : {3, 5, 7}) line(std::to_string(p) + "-colorings", invariants::count_colorings(d, p).count.str());
    line("kauffman bracket", bracket ? invariants::to_string(*bracket, 'A') : "skipped (over crossing cap)");
    emit(os.str(), opts, out);
    return int(kOk);
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stick-knot certificates: stick number, bridge index and superbridge index", "stickcert"};
  app.require_subcommand(1);
  Options opts;
  std::string tol = "1e-5";
  std::string crossings;
  std::string input;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", opts.seed, "Seed for every random choice")->capture_default_str();
    sub->add_option("-o,--output", opts.output, "Write the report to this file");
    sub->add_flag("--machine", opts.machine, "Line-oriented machine-readable output");
  };
  auto pipeline = [&](CLI::App* sub) {
    sub->add_option("--degree-max", opts.degree_max, "Largest symmetric group degree to search")->capture_default_str();
    sub->add_option("--tol", tol, "Relative edge-length tolerance for equilaterality")->capture_default_str();
    sub->add_option("--crossing-cap", opts.crossing_cap, "Skip the Kauffman bracket above this many crossings")->capture_default_str();
  };

  auto* analyze = app.add_subcommand("analyze", "Full pipeline on a coordinate file");
  analyze->add_option("coords", input, "Coordinate file")->required()->check(CLI::ExistingFile);
  analyze->add_option("--catalog", opts.catalog, "Store the result in this catalog directory");
  common(analyze);
  pipeline(analyze);

  auto* sweep = app.add_subcommand("sweep", "Min and max local maxima over random directions");
  sweep->add_option("coords", input, "Coordinate file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--samples", opts.samples, "Number of directions")->capture_default_str();
  common(sweep);

  auto* change = app.add_subcommand("change", "Switch crossings of a PD diagram and search again");
  change->add_option("pd", input, "PD file")->required()->check(CLI::ExistingFile);
  change->add_option("--crossings", crossings, "Comma-separated crossing ids");
  change->add_option("--degree-max", opts.degree_max, "Largest symmetric group degree to search")->capture_default_str();
  common(change);

  auto* batch = app.add_subcommand("batch", "Analyze every .tsv file in a directory");
  batch->add_option("dir", input, "Fixture directory")->required()->check(CLI::ExistingDirectory);
  common(batch);
  pipeline(batch);

  auto* homsearch = app.add_subcommand("homsearch", "Transposition surjections of a Wirtinger presentation");
  homsearch->add_option("input", input, "Presentation file (or PD file with --pd)")->required()->check(CLI::ExistingFile);
  homsearch->add_flag("--pd", opts.pd_input, "Input is a PD file");
  homsearch->add_option("--degree", opts.degree, "List all classes for this degree");
  homsearch->add_option("--max-results", opts.max_results, "Stop after this many classes (0: all)");
  homsearch->add_option("--degree-max", opts.degree_max, "Largest symmetric group degree to search")->capture_default_str();
  common(homsearch);

  auto* inv = app.add_subcommand("invariants", "Invariants of a PD diagram");
  inv->add_option("pd", input, "PD file")->required()->check(CLI::ExistingFile);
  inv->add_option("--crossing-cap", opts.crossing_cap, "Skip the Kauffman bracket above this many crossings")->capture_default_str();
  common(inv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }
  try {
    opts.tol = parse_decimal(tol);
    opts.crossings = parse_id_list(crossings);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  if (*analyze) return cmd_analyze(input, opts, out, err);
  if (*sweep) return cmd_sweep(input, opts, out, err);
  if (*change) return cmd_change(input, opts, out, err);
  if (*batch) return cmd_batch(input, opts, out, err);
  if (*homsearch) return cmd_homsearch(input, opts, out, err);
  if (*inv) return cmd_invariants(input, opts, out, err);
  return kUsage;
}

}  // namespace stickcert::cli
