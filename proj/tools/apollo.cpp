// apollo: lattice reports, packing generation, verification and counting.

#include <CLI11.hpp>

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "apollo/apollo.hpp"

using namespace apollo;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kConfig = 2, kBudget = 3 };

struct CaseArgs {
  std::string name = "circle";
  int m = 4;
  std::string config;

  CaseConfig load() const {
    if (!config.empty()) return load_case_file(config);
    if (name == "dim") return dim_family_case(m);
    return builtin_case(name);
  }
};

void add_case_options(CLI::App* app, CaseArgs& a) {
  app->add_option("--case", a.name, "built-in case: circle, sphere, dim");
  app->add_option("--m", a.m, "family parameter for --case dim");
  app->add_option("--config", a.config, "case file (overrides --case)");
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

void print_matrix(std::ostream& o, const IntegerMatrix& g) {
  std::size_t w = 1;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) w = std::max(w, g(i, j).str().size());
  for (std::size_t i = 0; i < g.rows(); ++i) {
    o << "  ";
    for (std::size_t j = 0; j < g.cols(); ++j) o << std::setw(static_cast<int>(w) + 1) << g(i, j).str();
    o << "\n";
  }
}

void print_generator_table(std::ostream& o, const GramContext& ctx, const std::vector<NamedNormal>& list) {
  const auto rep = validate_generators(ctx, list);
  for (const auto& c : rep.checks) {
    o << "  " << pad(c.name, 5) << pad(c.normal.to_string(), 22) << " n.n = " << pad(c.self_pairing.str(), 5);
    if (c.null)
      o << " NULL";
    else
      o << (c.integral ? " integral" : " NOT integral") << (c.form_preserved ? "" : ", form not preserved")
        << (c.involution ? "" : ", not an involution");
    if (!c.note.empty()) o << "  (" << c.note << ")";
    o << "\n";
  }
}

int cmd_lattice_info(const CaseArgs& args) {
  const CaseConfig cfg = args.load();
  std::ostream& o = std::cout;
  o << "case " << cfg.name << " (rank " << cfg.dim << ")\n";
  o << "Gram matrix:\n";
  print_matrix(o, cfg.gram);
  const Case c = resolve_case(cfg);
  const auto sig = c.ctx.signature();
  o << "signature (" << sig.pos << ", " << sig.neg << ")\n";
  if (c.has_cusp()) o << "cusp E = " << c.ctx.labels()[c.ctx.cusp_index()] << " = " << c.E().to_string() << "\n";

  if (cfg.reconstruct) {
    try {
      const auto r = reconstruct_gram(cfg);
      o << "Gram rebuilt from tangency rules: " << (r.gram == cfg.gram ? "matches" : "DIFFERS") << "\n";
      for (const auto& s : r.steps)
        if (s.find("fibre") != std::string::npos) o << "  " << s << "\n";
    } catch (const ConfigError& e) {
      o << "Gram rebuild failed: " << e.what() << "\n";
    }
  }

  if (!c.derivations.empty()) {
    o << "derived vectors:\n";
    for (const auto& d : c.derivations) {
      o << "  " << pad(d.name, 5) << pad(d.value.to_string(), 22) << " n.n = " << pad(d.self_pairing.str(), 5);
      if (d.integral) o << (*d.integral ? " integral" : " NOT integral");
      if (d.printed) o << (d.matches_printed ? "  matches printed" : "  printed " + d.printed->to_string() + " differs");
      o << "\n";
    }
  }
  if (!c.wall_list.empty()) {
    o << "walls of Gamma (derived):\n";
    print_generator_table(o, c.ctx, c.wall_list);
  }
  if (!c.printed_list.empty()) {
    o << "printed normals:\n";
    print_generator_table(o, c.ctx, c.printed_list);
  }
  for (const auto& [name, v] : cfg.rejected) {
    const bool integral = reflection_is_integral(c.ctx, v);
    o << "candidate " << name << " = " << v.to_string() << " n.n = " << norm(c.ctx, v).str() << ": "
      << (integral ? "integral (not rejected)" : "rejected, reflection not integral") << "\n";
  }
  for (const auto& d : c.derivations)
    if (d.printed && !d.matches_printed) {
      const Integer pn = norm(c.ctx, *d.printed);
      o << "note: printed " << d.name << " = " << d.printed->to_string() << " has n.n = " << pn.str();
      if (pn == 0 && d.kind == "normal") o << " (null, cannot be a wall)";
      if (pn != 0 && d.kind == "null") o << " (not null)";
      o << "; the stated constraints give " << d.value.to_string() << "\n";
    }
  if (cfg.name.rfind("dim", 0) == 0 && !cfg.printed.empty()) {
    const int m = static_cast<int>(cfg.dim) - 2;
    o << "n = " << cfg.printed.front().second.to_string() << ", membership (integral reflection): "
      << (m >= 2 && higher_dim_membership(m) ? "true" : "false") << "\n";
  }
  if (c.face && c.has_cusp()) {
    const auto gs = c.gamma();
    try {
      const auto D = find_chamber_vector(c.ctx, c.E(), *c.face, gs.normals());
      o << "chamber vector D = " << D.to_string() << " (D.D = " << norm(c.ctx, D).str() << ")\n";
    } catch (const ChamberError& e) {
      o << "chamber vector: " << e.what() << "\n";
    }
  }
  return kOk;
}

struct GenArgs {
  CaseArgs cs;
  int depth = 6;
  double max_curvature = 0;
  std::size_t max_elements = 5'000'000;
  std::string format = "json";
  std::string out;
  unsigned workers = 1;
  std::string generators = "derived";
  bool force = false;
};

void print_verification(std::ostream& o, const VerificationReport& r) {
  o << "elements " << r.elements << ", pairs " << r.pairs_checked << ", tangent pairs " << r.tangent_pairs
    << ", intersecting pairs " << r.intersecting_pairs << ", tangent cliques " << r.tangent_cliques
    << ", Descartes failures exact/float " << r.descartes_exact_failures << "/" << r.descartes_float_failures
    << ", max defect " << fmt9(r.max_descartes_defect) << "\n";
  if (r.norm_failures || r.sign_failures)
    o << "norm failures " << r.norm_failures << ", sign failures " << r.sign_failures << "\n";
  for (const auto& s : r.counterexamples) o << "  " << s << "\n";
  o << "verification: " << (r.pass ? "PASS" : "FAIL") << "\n";
}

int cmd_gen(const GenArgs& a) {
  if (a.format != "json" && a.format != "svg" && a.format != "text")
    throw ConfigError("format must be svg, json or text");
  if (a.depth < 0) throw ConfigError("--depth must be nonnegative");
  if (a.max_elements == 0) throw ConfigError("--max-elements must be positive");
  if (a.max_curvature < 0) throw ConfigError("--max-curvature must be positive");
  auto c = std::make_shared<const Case>(resolve_case(a.cs.load()));
  OrbitBudget b;
  b.max_depth = a.depth;
  b.max_elements = a.max_elements;
  b.workers = std::max(1u, a.workers);
  if (a.max_curvature > 0) {
    // chart curvature K <=> curvature_sq <= K^2 scale^2
    const Rational k(a.max_curvature);
    b.max_curvature_sq = k * k * make_chart(*c)->scale_sq();
  }
  GeneratorChoice choice;
  if (a.generators == "derived")
    choice = GeneratorChoice::Derived;
  else if (a.generators == "printed")
    choice = GeneratorChoice::Printed;
  else
    throw ConfigError("--generators must be derived or printed");
  const Packing p = build_packing(c, b, choice);
  std::cerr << "case " << p.case_tag() << ": " << p.elements.size() << " elements through depth "
            << p.record.depth_reached << "\n";
  print_verification(std::cerr, p.verification);
  if (!p.verification.pass && !a.force) {
    std::cerr << "verification failed; nothing written (use --force to emit anyway)\n";
    return kVerifyFailed;
  }
  std::string text;
  if (a.format == "json")
    text = dump(packing_json(p));
  else if (a.format == "svg")
    text = packing_svg(p);
  else
    text = packing_text(p);
  if (a.out.empty())
    std::cout << text;
  else
    write_file(a.out, text);
  return p.verification.pass ? kOk : kVerifyFailed;
}

int cmd_verify(const std::string& path, unsigned workers) {
  const LoadedPacking lp = load_packing(read_json_file(path));
  const ReverifyResult r = reverify(lp, std::max(1u, workers));
  std::cout << "case " << lp.case_name << ", " << lp.normals.size() << " stored normals\n";
  if (r.curvature_mismatches) std::cout << "stored curvature_sq mismatches " << r.curvature_mismatches << "\n";
  print_verification(std::cout, r.report);
  return r.pass ? kOk : kVerifyFailed;
}

struct CountArgs {
  CaseArgs cs;
  std::string mode = "curvature";
  double tmax = 1e4;
  std::string fit;
  double bmax = 0;
  std::string D;
  std::string csv, orbital_csv, json;
  bool self_test = false;
  unsigned workers = 1;
};

std::pair<double, double> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ConfigError("fit range must be lo:hi");
  try {
    const double lo = std::stod(s.substr(0, colon)), hi = std::stod(s.substr(colon + 1));
    if (!(lo > 0) || !(hi > lo)) throw ConfigError("fit range needs 0 < lo < hi");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw ConfigError("cannot parse fit range '" + s + "'");
  }
}

LatticeVector parse_vector_arg(const std::string& s, std::size_t dim) {
  std::string t = s;
  for (char& ch : t)
    if (ch == ',' || ch == '[' || ch == ']') ch = ' ';
  std::istringstream in(t);
  std::vector<Integer> c;
  std::string tok;
  while (in >> tok) {
    try {
      c.emplace_back(tok);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse vector '" + s + "'");
    }
  }
  if (c.size() != dim) throw ConfigError("vector '" + s + "' has the wrong length");
  return LatticeVector(std::move(c));
}

void print_fit(const std::string& label, const ExponentFit& f) {
  std::cout << label << " delta_hat = " << std::fixed << std::setprecision(4) << f.delta_hat
            << "   reference delta = " << fmt9(kApollonianDelta) << "   (fit over [" << std::defaultfloat << fmt9(f.lo)
            << ", " << fmt9(f.hi) << "], " << f.n_points << " points, SSR " << fmt9(f.residual) << ")\n";
}

int cmd_count(const CountArgs& a) {
  if (a.self_test) {
    const ExponentFit f = fit_exponent(synthetic_square_series(), 10, 1000);
    print_fit("synthetic floor(t^2):", f);
    const bool ok = std::abs(f.delta_hat - 2.0) <= 0.01;
    std::cout << "self-test " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kOk : kVerifyFailed;
  }
  if (a.mode != "curvature" && a.mode != "orbital" && a.mode != "both")
    throw ConfigError("--mode must be curvature, orbital or both");
  const unsigned workers = std::max(1u, a.workers);
  const Case c = resolve_case(a.cs.load());
  if (!c.face) throw ConfigError("case has no face vector");
  Json summary = Json::object();
  Json fits = Json::array();
  std::optional<CurvatureCount> cc;
  std::optional<ExponentFit> fc;
  std::pair<double, double> range = a.fit.empty() ? std::make_pair(a.tmax / 10, a.tmax) : parse_range(a.fit);

  if (a.mode != "orbital") {
    if (!(a.tmax > 0)) throw ConfigError("--tmax must be positive");
    if (range.second > a.tmax * (1 + 1e-12)) throw ConfigError("fit range exceeds --tmax");
    cc = count_by_curvature(c, a.tmax, workers);
    std::cout << "curvature count: " << cc->record.elements.size() << " classes modulo "
              << cc->record.translation_rank << " cusp translation(s), curvature <= " << fmt9(a.tmax)
              << ", descent violations " << cc->record.descent_violations << "\n";
    fc = fit_exponent(cc->series, range.first, range.second);
    print_fit("curvature:", *fc);
    fits.push_back(fit_json("curvature", *fc));
    if (!a.csv.empty()) write_file(a.csv, series_csv(cc->series));
  }
  if (a.mode != "curvature") {
    const auto gs = c.gamma();
    const LatticeVector D =
        a.D.empty() ? find_chamber_vector(c.ctx, c.E(), *c.face, gs.normals()) : parse_vector_arg(a.D, c.ctx.dim());
    std::uint64_t n_lo = 0, n_hi = 0;
    if (cc) {
      auto at = [&](double t) {
        return static_cast<std::uint64_t>(std::partition_point(cc->curvatures.begin(), cc->curvatures.end(),
                                                               [&](double k) { return k <= t * (1 + 1e-12); }) -
                                          cc->curvatures.begin());
      };
      n_lo = at(range.first);
      n_hi = at(range.second);
    }
    double bmax = a.bmax > 0 ? a.bmax : 1000;
    OrbitalCount oc;
    while (true) {
      oc = count_orbital(c.ctx, c.E(), *c.face, gs, *c.face, D, bmax, workers);
      if (!cc || a.bmax > 0 || oc.values.size() >= n_hi) break;
      bmax *= 2;
    }
    std::cout << "orbital count: D = " << D.to_string() << ", " << oc.values.size() << " images with |x.D| < "
              << fmt9(bmax) << ", descent violations " << oc.descent_violations << "\n";
    std::pair<double, double> orange = a.fit.empty() || cc ? std::make_pair(bmax / 10, bmax) : range;
    if (cc) {
      orange = matched_range(oc, n_lo, n_hi);
      std::cout << "matched scale: counts " << n_lo << ".." << n_hi << " reached over B in [" << fmt9(orange.first)
                << ", " << fmt9(orange.second) << "]\n";
    }
    const ExponentFit fo = fit_exponent(oc.series, orange.first, orange.second);
    print_fit("orbital:  ", fo);
    Json j = fit_json("orbital", fo);
    j["D"] = vector_json(D);
    fits.push_back(j);
    if (fc) std::cout << "difference " << std::fixed << std::setprecision(4) << std::abs(fo.delta_hat - fc->delta_hat)
                      << std::defaultfloat << "\n";
    const std::string& path = a.mode == "orbital" ? a.csv : a.orbital_csv;
    if (!path.empty()) write_file(path, series_csv(oc.series));
  }
  summary["case"] = c.cfg.name;
  summary["fits"] = fits;
  summary["reference_delta"] = kApollonianDelta;
  if (!a.json.empty()) write_file(a.json, dump(summary));
  return kOk;
}

struct DeriveArgs {
  CaseArgs cs;
  int discover = 0;
  std::vector<long long> norms;
};

int cmd_derive(const DeriveArgs& a) {
  const CaseConfig cfg = a.cs.load();
  const Case c = resolve_case(cfg);
  for (const auto& d : c.derivations) {
    std::cout << d.kind << " " << d.name << " orthogonal to {";
    for (std::size_t i = 0; i < d.constraints.size(); ++i) std::cout << (i ? ", " : "") << d.constraints[i];
    std::cout << "}";
    if (d.norm_target) std::cout << ", target n.n = " << d.norm_target->str();
    std::cout << "\n  -> " << d.value.to_string() << "  n.n = " << d.self_pairing.str();
    if (d.integral) std::cout << (*d.integral ? ", integral reflection" : ", reflection NOT integral");
    if (d.printed)
      std::cout << (d.matches_printed ? ", matches printed" : ", printed value " + d.printed->to_string() + " differs");
    if (d.solutions.size() > 1) std::cout << " (" << d.solutions.size() << " candidates, first kept)";
    std::cout << "\n";
  }
  if (a.discover > 0) {
    std::vector<long long> norms = a.norms;
    if (norms.empty())
      for (const auto& w : c.wall_list) {
        const long long v = to_int64(norm(c.ctx, w.normal));
        if (std::find(norms.begin(), norms.end(), v) == norms.end()) norms.push_back(v);
      }
    if (norms.empty()) throw ConfigError("--discover needs --norms or walls in the case");
    const auto found = discover_generators(c.ctx, a.discover, norms);
    std::cout << "integral reflections with height <= " << a.discover << ": " << found.size() << "\n";
    for (const auto& v : found) {
      std::cout << "  " << pad(v.to_string(), 24) << " n.n = " << norm(c.ctx, v).str();
      if (c.has_cusp()) std::cout << "  E.n = " << pair(c.ctx, v, c.E()).str();
      for (const auto& w : c.wall_list)
        if (w.normal == v || w.normal == -v) std::cout << "  (" << w.name << ")";
      std::cout << "\n";
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Apollonian packings from Lorentzian lattices"};
  app.require_subcommand(1);
  unsigned workers = 1;

  auto* lattice = app.add_subcommand("lattice", "lattice reports");
  lattice->require_subcommand(1);
  auto* info = lattice->add_subcommand("info", "Gram matrix, signature and generator table");
  CaseArgs info_args;
  add_case_options(info, info_args);

  auto* gen = app.add_subcommand("gen", "enumerate, verify and emit a packing");
  GenArgs ga;
  add_case_options(gen, ga.cs);
  gen->add_option("--depth", ga.depth, "maximum word length");
  gen->add_option("--max-curvature", ga.max_curvature, "keep elements with chart curvature at most this");
  gen->add_option("--max-elements", ga.max_elements, "element budget");
  gen->add_option("--format", ga.format, "svg, json or text");
  gen->add_option("--out", ga.out, "output file (default stdout)");
  gen->add_option("--workers", ga.workers, "worker threads");
  gen->add_option("--generators", ga.generators, "derived or printed");
  gen->add_flag("--force", ga.force, "emit even if verification fails");

  auto* ver = app.add_subcommand("verify", "re-verify a packing JSON file from its normals");
  std::string vfile;
  ver->add_option("file", vfile, "packing JSON")->required();
  ver->add_option("--workers", workers, "worker threads");

  auto* count = app.add_subcommand("count", "curvature and orbital counting with exponent fits");
  CountArgs ca;
  add_case_options(count, ca.cs);
  count->add_option("--mode", ca.mode, "curvature, orbital or both");
  count->add_option("--tmax", ca.tmax, "largest curvature counted");
  count->add_option("--fit", ca.fit, "fit range lo:hi");
  count->add_option("--bmax", ca.bmax, "orbital bound on |x.D|");
  count->add_option("--D", ca.D, "chamber vector, e.g. 2,1,1,3");
  count->add_option("--csv", ca.csv, "threshold,count series");
  count->add_option("--orbital-csv", ca.orbital_csv, "orbital series when --mode both");
  count->add_option("--json", ca.json, "fit summary");
  count->add_flag("--self-test", ca.self_test, "fit the synthetic floor(t^2) series");
  count->add_option("--workers", ca.workers, "worker threads");

  auto* derive = app.add_subcommand("derive-normals", "solve the constraint lines of a case");
  DeriveArgs da;
  add_case_options(derive, da.cs);
  derive->add_option("--discover", da.discover, "also list integral reflections up to this coordinate height");
  derive->add_option("--norms", da.norms, "self-pairings for --discover");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (info->parsed()) return cmd_lattice_info(info_args);
    if (gen->parsed()) return cmd_gen(ga);
    if (ver->parsed()) return cmd_verify(vfile, workers);
    if (count->parsed()) return cmd_count(ca);
    if (derive->parsed()) return cmd_derive(da);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const ValidationFailure& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerifyFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}
