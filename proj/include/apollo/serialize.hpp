#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "apollo/counting.hpp"
#include "apollo/packing.hpp"

namespace apollo {

using Json = nlohmann::ordered_json;

inline constexpr const char* kPackingFormat = "apollo-packing/1";

// ------------------------------------------------------------------ scalars

inline Json integer_json(const Integer& x) {
  if (fits_int64(x)) return Json(to_int64(x));
  return Json(x.str());
}

inline Integer integer_from_json(const Json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return Integer(j.get<long long>());
    if (j.is_string()) return Integer(j.get<std::string>());
  } catch (const std::exception&) {
  }
  throw SchemaError(where + ": expected an integer");
}

inline Json rational_json(const Rational& q) {
  return Json{{"num", integer_json(numerator(q))}, {"den", integer_json(denominator(q))}};
}

inline Rational rational_from_json(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den")) throw SchemaError(where + ": expected {num, den}");
  const Integer d = integer_from_json(j["den"], where + ".den");
  if (d == 0) throw SchemaError(where + ": zero denominator");
  return ratio(integer_from_json(j["num"], where + ".num"), d);
}

inline Json vector_json(const LatticeVector& v) {
  Json a = Json::array();
  for (std::size_t i = 0; i < v.size(); ++i) a.push_back(integer_json(v[i]));
  return a;
}

inline LatticeVector vector_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an integer array");
  std::vector<Integer> c;
  for (std::size_t i = 0; i < j.size(); ++i) c.push_back(integer_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return LatticeVector(std::move(c));
}

inline Json matrix_json(const IntegerMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(integer_json(m(i, j)));
    a.push_back(r);
  }
  return a;
}

inline IntegerMatrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SchemaError(where + ": expected a square integer matrix");
  const std::size_t k = j.size();
  IntegerMatrix m(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    const LatticeVector r = vector_from_json(j[i], where);
    if (r.size() != k) throw SchemaError(where + ": row " + std::to_string(i) + " has the wrong length");
    for (std::size_t c = 0; c < k; ++c) m(i, c) = r[c];
  }
  return m;
}

inline const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
  return j[key];
}

// ------------------------------------------------------------------ packing

inline Json verification_json(const VerificationReport& r) {
  return Json{{"pass", r.pass},
              {"elements", r.elements},
              {"flat_elements", r.flat_elements},
              {"pairs_checked", r.pairs_checked},
              {"intersecting_pairs", r.intersecting_pairs},
              {"tangent_pairs", r.tangent_pairs},
              {"norm_failures", r.norm_failures},
              {"sign_failures", r.sign_failures},
              {"tangent_cliques", r.tangent_cliques},
              {"descartes_exact_failures", r.descartes_exact_failures},
              {"descartes_float_failures", r.descartes_float_failures},
              {"max_descartes_defect", r.max_descartes_defect},
              {"counterexamples", r.counterexamples}};
}

inline Json element_json(const BoundarySphere& s) {
  Json e{{"normal", vector_json(s.normal)}, {"curvature_sq", rational_json(s.curvature_sq)}, {"curvature", s.curvature}};
  if (s.is_flat()) {
    e["line"] = Json{{"normal", s.line_normal}, {"offset", s.line_offset}};
  } else {
    e["center"] = s.center;
    e["radius"] = s.radius;
  }
  e["word"] = s.word;
  return e;
}

/// Deterministic document: no timings, no worker counts.
inline Json packing_json(const Packing& p) {
  const Case& c = *p.source;
  Json gens = Json::array();
  const auto& list = p.generators == GeneratorChoice::Derived ? c.wall_list : c.printed_list;
  for (const auto& g : list) gens.push_back(Json{{"name", g.name}, {"normal", vector_json(g.normal)}});
  Json budget{{"max_depth", p.budget.max_depth}, {"max_elements", p.budget.max_elements}};
  budget["max_curvature_sq"] = p.budget.max_curvature_sq ? rational_json(*p.budget.max_curvature_sq) : Json();
  Json elements = Json::array();
  for (const auto& e : p.elements) elements.push_back(element_json(e));
  return Json{
      {"format", kPackingFormat},
      {"case", c.cfg.name},
      {"dim", c.ctx.dim()},
      {"gram", matrix_json(c.ctx.gram())},
      {"cusp", vector_json(c.E())},
      {"face", vector_json(*c.face)},
      {"generators", Json{{"choice", p.generators == GeneratorChoice::Derived ? "derived" : "printed"}, {"walls", gens}}},
      {"budget", budget},
      {"orbit", Json{{"level_sizes", p.record.level_sizes},
                     {"depth_reached", p.record.depth_reached},
                     {"closed", p.record.closed},
                     {"excluded_by_curvature", p.record.excluded_by_curvature},
                     {"truncation", p.record.truncation}}},
      {"chart", Json{{"scale", p.chart->scale()},
                     {"scale_sq", rational_json(p.chart->scale_sq())},
                     {"F", vector_json(p.chart->F())},
                     {"strip", p.chart->strip_mode()}}},
      {"elements", elements},
      {"verification", verification_json(p.verification)}};
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

struct LoadedPacking {
  std::string case_name;
  IntegerMatrix gram;
  LatticeVector E;
  Rational scale_sq;
  std::vector<LatticeVector> normals;
  std::vector<Rational> stored_curvature_sq;
};

/// Parses a packing document. The Gram matrix must match the built-in case of the same name.
inline LoadedPacking load_packing(const Json& j) {
  if (!j.is_object()) throw SchemaError("packing document must be a JSON object");
  if (j.contains("format") && j["format"] != kPackingFormat)
    throw SchemaError("unsupported format '" + j["format"].dump() + "'");
  LoadedPacking lp;
  const Json& name = require(j, "case", "packing");
  if (!name.is_string()) throw SchemaError("packing.case: expected a string");
  lp.case_name = name.get<std::string>();
  lp.gram = matrix_from_json(require(j, "gram", "packing"), "packing.gram");
  lp.E = vector_from_json(require(j, "cusp", "packing"), "packing.cusp");
  if (lp.E.size() != lp.gram.rows()) throw SchemaError("packing.cusp has the wrong dimension");
  lp.scale_sq = rational_from_json(require(require(j, "chart", "packing"), "scale_sq", "packing.chart"),
                                   "packing.chart.scale_sq");
  try {
    const CaseConfig ref = builtin_case(lp.case_name);
    if (!(ref.gram == lp.gram)) throw SchemaError("Gram matrix does not match built-in case '" + lp.case_name + "'");
  } catch (const ConfigError&) {
    // not a built-in case; the stored Gram matrix is taken as given
  }
  const Json& els = require(j, "elements", "packing");
  if (!els.is_array()) throw SchemaError("packing.elements: expected an array");
  for (std::size_t i = 0; i < els.size(); ++i) {
    const std::string where = "packing.elements[" + std::to_string(i) + "]";
    LatticeVector n = vector_from_json(require(els[i], "normal", where), where + ".normal");
    if (n.size() != lp.gram.rows()) throw SchemaError(where + ".normal has the wrong dimension");
    lp.normals.push_back(std::move(n));
    lp.stored_curvature_sq.push_back(els[i].contains("curvature_sq")
                                         ? rational_from_json(els[i]["curvature_sq"], where + ".curvature_sq")
                                         : Rational(-1));
  }
  return lp;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
}

struct ReverifyResult {
  VerificationReport report;
  std::size_t curvature_mismatches = 0;
  bool pass = false;
};

/// Recomputes every check from the stored normals alone.
inline ReverifyResult reverify(const LoadedPacking& lp, unsigned workers = 1) {
  GramContext ctx(lp.gram, std::nullopt);
  ReverifyResult r;
  if (norm(ctx, lp.E) != 0) throw SchemaError("stored cusp is not null");
  VerifyOptions opt;
  opt.workers = workers;
  r.report = verify_normals(ctx, lp.E, lp.scale_sq, lp.normals, opt);
  for (std::size_t i = 0; i < lp.normals.size(); ++i) {
    if (lp.stored_curvature_sq[i] < 0 || norm(ctx, lp.normals[i]) >= 0) continue;  // already a norm failure
    if (curvature_sq(ctx, lp.E, lp.normals[i]) != lp.stored_curvature_sq[i]) {
      ++r.curvature_mismatches;
      if (r.report.counterexamples.size() < 20)
        r.report.counterexamples.push_back("element " + std::to_string(i) + " stores a wrong curvature_sq");
    }
  }
  r.pass = r.report.pass && r.curvature_mismatches == 0;
  return r;
}

// ---------------------------------------------------------------------- text

inline std::string fmt9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

inline std::string packing_text(const Packing& p) {
  std::ostringstream o;
  o << "# case " << p.case_tag() << ", " << p.elements.size() << " elements, depth " << p.record.depth_reached
    << ", scale " << fmt9(p.chart->scale()) << "\n";
  for (const auto& e : p.elements) {
    o << e.normal.to_string() << "  k=" << fmt9(e.curvature);
    if (e.is_flat()) {
      o << "  line";
      for (double g : e.line_normal) o << " " << fmt9(g);
      o << " = " << fmt9(e.line_offset);
    } else {
      o << "  c=(";
      for (std::size_t i = 0; i < e.center.size(); ++i) o << (i ? ", " : "") << fmt9(e.center[i]);
      o << ")  r=" << fmt9(e.radius);
    }
    o << "\n";
  }
  return o.str();
}

// ----------------------------------------------------------------------- svg

/// Plane packings only: circles and the lines of the strip, in chart units with y pointing up.
inline std::string packing_svg(const Packing& p, double px_per_unit = 400) {
  if (p.chart->chart_dim() != 2) throw DomainError("SVG output needs a planar packing");
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& e : p.elements) {
    if (e.is_flat()) continue;
    x0 = std::min(x0, e.center[0] - e.radius);
    x1 = std::max(x1, e.center[0] + e.radius);
    y0 = std::min(y0, e.center[1] - e.radius);
    y1 = std::max(y1, e.center[1] + e.radius);
  }
  if (p.chart->strip_mode()) y0 = std::min(y0, 0.0), y1 = std::max(y1, 1.0);
  if (!(x1 > x0)) x0 = std::min(x0, -1.0), x1 = std::max(x1, 1.0);
  if (!(y1 > y0)) y0 = std::min(y0, -1.0), y1 = std::max(y1, 1.0);
  const double pad = 0.05 * std::max(x1 - x0, y1 - y0);
  x0 -= pad, x1 += pad, y0 -= pad, y1 += pad;
  const double w = x1 - x0, h = y1 - y0;
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt9(w * px_per_unit) << "\" height=\""
    << fmt9(h * px_per_unit) << "\" viewBox=\"" << fmt9(x0) << " " << fmt9(-y1) << " " << fmt9(w) << " " << fmt9(h)
    << "\">\n";
  o << "<g fill=\"none\" stroke=\"black\" stroke-width=\"" << fmt9(1.0 / px_per_unit) << "\">\n";
  for (const auto& e : p.elements) {
    if (e.is_flat()) {
      const double gx = e.line_normal[0], gy = e.line_normal[1], c = e.line_offset;
      double ax, ay, bx, by;
      if (std::abs(gy) >= std::abs(gx)) {
        ax = x0, bx = x1, ay = (c - gx * x0) / gy, by = (c - gx * x1) / gy;
      } else {
        ay = y0, by = y1, ax = (c - gy * y0) / gx, bx = (c - gy * y1) / gx;
      }
      o << "<line x1=\"" << fmt9(ax) << "\" y1=\"" << fmt9(-ay) << "\" x2=\"" << fmt9(bx) << "\" y2=\"" << fmt9(-by)
        << "\"/>\n";
    } else {
      o << "<circle cx=\"" << fmt9(e.center[0]) << "\" cy=\"" << fmt9(-e.center[1]) << "\" r=\"" << fmt9(e.radius)
        << "\"/>\n";
    }
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

// ------------------------------------------------------------------ counting

inline std::string series_csv(const CountSeries& s) {
  std::ostringstream o;
  o << "threshold,count\n";
  for (std::size_t i = 0; i < s.thresholds.size(); ++i) o << fmt9(s.thresholds[i]) << "," << s.counts[i] << "\n";
  return o.str();
}

inline Json fit_json(const std::string& mode, const ExponentFit& f) {
  return Json{{"mode", mode},
              {"delta_hat", f.delta_hat},
              {"range", Json::array({f.lo, f.hi})},
              {"residual", f.residual},
              {"n_points", f.n_points},
              {"method", f.method},
              {"reference_delta", kApollonianDelta}};
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
  if (!f) throw ConfigError("write to '" + path + "' failed");
}

}  // namespace apollo
