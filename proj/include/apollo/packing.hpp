#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apollo/geometry.hpp"
#include "apollo/group.hpp"
#include "apollo/packed.hpp"
#include "apollo/parallel.hpp"

namespace apollo {

// ------------------------------------------------------------- Gram rebuild

struct Reconstruction {
  IntegerMatrix gram;
  std::vector<std::string> steps;
};

/// Rebuilds the Gram matrix from the tangency, cusp and fibre rules alone.
inline Reconstruction reconstruct_gram(const CaseConfig& cfg) {
  if (!cfg.reconstruct) throw ConfigError("case '" + cfg.name + "' has no reconstruction rules");
  const auto& r = *cfg.reconstruct;
  const std::size_t k = cfg.dim;
  std::vector<std::vector<std::optional<Integer>>> g(k, std::vector<std::optional<Integer>>(k));
  Reconstruction out;
  auto label = [](std::size_t i) { return "e" + std::to_string(i + 1); };
  auto set = [&](std::size_t i, std::size_t j, const Integer& v, const std::string& why) {
    for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
      if (g[a][b] && *g[a][b] != v)
        throw ConfigError("rule inconsistency at " + label(a) + "." + label(b) + ": " + g[a][b]->str() + " vs " + v.str());
      g[a][b] = v;
    }
    out.steps.push_back(label(i) + "." + label(j) + " = " + v.str() + "  (" + why + ")");
  };

  for (std::size_t i : r.tangent) set(i, i, -2, "-2 class");
  for (std::size_t a = 0; a < r.tangent.size(); ++a)
    for (std::size_t b = a + 1; b < r.tangent.size(); ++b) set(r.tangent[a], r.tangent[b], 2, "tangent");
  if (r.cusp) {
    const std::size_t c = *r.cusp;
    set(c, c, 0, "cusp is null");
    for (std::size_t i : r.cusp_on) set(i, c, 0, "cusp lies on the wall");
    if (r.fiber_face) {
      // the fibre class cusp - face is a -2 class tangent to the other classes
      const std::size_t f = *r.fiber_face;
      if (!g[f][f] || !g[f][c] || !g[c][c]) throw ConfigError("fibre rule needs the face and cusp pairings first");
      const Integer fiber_norm = *g[c][c] - 2 * *g[f][c] + *g[f][f];
      if (fiber_norm != -2) throw ConfigError("rule inconsistency: fibre class has self-pairing " + fiber_norm.str());
      for (std::size_t i : r.tangent) {
        if (i == f) continue;
        if (!g[i][f]) throw ConfigError("fibre rule needs " + label(i) + "." + label(f));
        // e_i.(E - face) = 2  =>  a = 2 + e_i.face
        set(i, c, 2 + *g[i][f], "fibre tangency: a - " + g[i][f]->str() + " = 2");
      }
    }
  }
  out.gram = IntegerMatrix(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (!g[i][j]) throw ConfigError("rules leave " + label(i) + "." + label(j) + " undetermined");
      out.gram(i, j) = *g[i][j];
    }
  return out;
}

// -------------------------------------------------------------- verification

struct VerificationReport {
  std::size_t elements = 0;
  std::size_t flat_elements = 0;
  std::size_t pairs_checked = 0;
  std::size_t intersecting_pairs = 0;
  std::size_t tangent_pairs = 0;
  std::size_t norm_failures = 0;
  std::size_t sign_failures = 0;
  std::size_t tangent_cliques = 0;  // mutually tangent (n+2)-tuples
  std::size_t descartes_exact_failures = 0;
  std::size_t descartes_float_failures = 0;
  double max_descartes_defect = 0;
  std::vector<std::string> counterexamples;
  bool pass = false;
};

struct VerifyOptions {
  Integer expected_norm = -2;
  unsigned workers = 1;
  double descartes_tol = 1e-9;
  std::size_t max_counterexamples = 20;
  std::size_t max_cliques = 5'000'000;
};

/// Exact checks on a list of normals: self-pairing, sign rule, pairwise non-intersection,
/// and the Descartes relation on every mutually tangent (n+2)-tuple.
inline VerificationReport verify_normals(const GramContext& ctx, const LatticeVector& E, const Rational& scale_sq,
                                         const std::vector<LatticeVector>& normals, const VerifyOptions& opt = {}) {
  const std::size_t k = ctx.dim();
  const std::size_t n = normals.size();
  const int bdim = static_cast<int>(k) - 2;
  VerificationReport rep;
  rep.elements = n;
  auto note = [&](const std::string& s) {
    if (rep.counterexamples.size() < opt.max_counterexamples) rep.counterexamples.push_back(s);
  };

  const PackedMat J = PackedMat::from(ctx.gram());
  const PackedVec je = J.apply(pack(E));
  std::vector<PackedVec> v(n), jv(n);
  std::vector<std::int64_t> nn(n), h(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = pack(normals[i]);
    jv[i] = J.apply(v[i]);
    nn[i] = dot(v[i], jv[i], k);
    h[i] = dot(je, v[i], k);
    if (nn[i] != opt.expected_norm) {
      ++rep.norm_failures;
      note("element " + std::to_string(i) + " " + normals[i].to_string() + " has self-pairing " + std::to_string(nn[i]));
    }
    if (!(canonical_packed(v[i], je, k) == v[i])) {
      ++rep.sign_failures;
      note("element " + std::to_string(i) + " " + normals[i].to_string() + " is not in canonical form");
    }
    if (h[i] == 0) ++rep.flat_elements;
  }

  // pairwise scan, rows split across workers and merged in row order
  struct Row {
    std::size_t inter = 0;
    std::vector<std::size_t> tangent;
    std::vector<std::size_t> bad;
  };
  std::vector<Row> rows(n);
  parallel_for(n, opt.workers, [&](std::size_t i) {
    Row& r = rows[i];
    if (nn[i] >= 0) return;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (nn[j] >= 0) continue;
      const i128 p = dot_wide(v[i], jv[j], k);
      const i128 lhs = p * p, rhs = static_cast<i128>(nn[i]) * nn[j];
      if (lhs < rhs) {
        ++r.inter;
        if (r.bad.size() < 4) r.bad.push_back(j);
      } else if (lhs == rhs) {
        bool prop = true;  // same wall twice
        for (std::size_t a = 0; a < k && prop; ++a)
          for (std::size_t b = a + 1; b < k && prop; ++b)
            prop = static_cast<i128>(v[i].c[a]) * v[j].c[b] == static_cast<i128>(v[i].c[b]) * v[j].c[a];
        if (prop) {
          ++r.inter;
          if (r.bad.size() < 4) r.bad.push_back(j);
        } else {
          r.tangent.push_back(j);
        }
      }
    }
  });
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    rep.intersecting_pairs += rows[i].inter;
    rep.tangent_pairs += rows[i].tangent.size();
    for (std::size_t j : rows[i].bad)
      note("elements " + std::to_string(i) + " " + normals[i].to_string() + " and " + std::to_string(j) + " " +
           normals[j].to_string() + " intersect");
    adj[i] = std::move(rows[i].tangent);  // neighbours with larger index, ascending
  }
  rep.pairs_checked = n < 2 ? 0 : n * (n - 1) / 2;

  // mutually tangent (n+2)-tuples
  const std::size_t clique = static_cast<std::size_t>(bdim) + 2;
  const bool equal_norms = std::all_of(nn.begin(), nn.end(), [&](std::int64_t x) { return x == nn[0]; });
  std::vector<std::size_t> stack;
  auto is_adj = [&](std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    return std::binary_search(adj[a].begin(), adj[a].end(), b);
  };
  auto check_clique = [&]() {
    ++rep.tangent_cliques;
    std::vector<Integer> hv;
    std::vector<double> cv;
    for (std::size_t i : stack) {
      hv.emplace_back(static_cast<long long>(h[i]));
      cv.push_back(std::sqrt(static_cast<double>(h[i]) * h[i] / static_cast<double>(-nn[i]) / to_double(scale_sq)));
    }
    if (equal_norms && !descartes_exact(hv, bdim)) {
      ++rep.descartes_exact_failures;
      std::string s = "Descartes relation fails on";
      for (std::size_t i : stack) s += " " + std::to_string(i);
      note(s);
    }
    const double d = descartes_defect(cv, bdim);
    rep.max_descartes_defect = std::max(rep.max_descartes_defect, d);
    if (d > opt.descartes_tol) ++rep.descartes_float_failures;
  };
  auto grow = [&](auto&& self, const std::vector<std::size_t>& cand) -> void {
    if (stack.size() == clique) {
      check_clique();
      return;
    }
    for (std::size_t idx = 0; idx < cand.size(); ++idx) {
      if (rep.tangent_cliques >= opt.max_cliques) return;
      const std::size_t c = cand[idx];
      std::vector<std::size_t> next;
      for (std::size_t q = idx + 1; q < cand.size(); ++q)
        if (is_adj(c, cand[q])) next.push_back(cand[q]);
      if (stack.size() + 1 + next.size() < clique) continue;
      stack.push_back(c);
      self(self, next);
      stack.pop_back();
    }
  };
  if (bdim >= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      if (adj[i].size() + 1 < clique) continue;
      stack = {i};
      grow(grow, adj[i]);
    }
  }
  rep.pass = rep.norm_failures == 0 && rep.sign_failures == 0 && rep.intersecting_pairs == 0 &&
             rep.descartes_exact_failures == 0 && rep.descartes_float_failures == 0;
  return rep;
}

// -------------------------------------------------------------------- packing

enum class GeneratorChoice { Derived, Printed };

struct Packing {
  std::shared_ptr<const Case> source;
  std::shared_ptr<const BoundaryChart> chart;
  GeneratorChoice generators = GeneratorChoice::Derived;
  OrbitBudget budget;
  OrbitRecord record;
  std::vector<BoundarySphere> elements;
  VerificationReport verification;

  const std::string& case_tag() const { return source->cfg.name; }
};

inline std::shared_ptr<const BoundaryChart> make_chart(const Case& c) {
  if (!c.has_cusp()) throw ConfigError("case '" + c.cfg.name + "' has no cusp");
  if (c.strip) return std::make_shared<BoundaryChart>(c.ctx, c.E(), c.strip->first, c.strip->second);
  return std::make_shared<BoundaryChart>(c.ctx, c.E());
}

inline GeneratorSet packing_generators(const Case& c, GeneratorChoice choice) {
  const auto& list = choice == GeneratorChoice::Derived ? c.wall_list : c.printed_list;
  const auto rep = validate_generators(c.ctx, list);
  if (!rep.pass) {
    std::string bad;
    for (const auto& chk : rep.checks)
      if (!chk.ok()) bad += " " + chk.name + " (" + chk.note + ")";
    throw ValidationFailure("generator validation failed:" + bad);
  }
  return make_generator_set(c.ctx, list);
}

inline VerificationReport verify_packing(const Packing& p, unsigned workers = 1) {
  std::vector<LatticeVector> normals;
  normals.reserve(p.elements.size());
  for (const auto& e : p.elements) normals.push_back(e.normal);
  VerifyOptions opt;
  opt.workers = workers;
  return verify_normals(p.source->ctx, p.chart->E(), p.chart->scale_sq(), normals, opt);
}

/// Orbit of the face normal under Gamma, charted and verified.
inline Packing build_packing(std::shared_ptr<const Case> c, const OrbitBudget& budget,
                             GeneratorChoice choice = GeneratorChoice::Derived) {
  if (!c->face) throw ConfigError("case '" + c->cfg.name + "' has no face vector");
  Packing p;
  p.source = c;
  p.generators = choice;
  p.budget = budget;
  p.chart = make_chart(*c);
  const GeneratorSet gs = packing_generators(*c, choice);
  p.record = enumerate_orbit(c->ctx, c->E(), gs, *c->face, budget);
  p.elements.reserve(p.record.elements.size());
  for (const auto& e : p.record.elements) p.elements.push_back(p.chart->element(e.normal, e.word));
  p.verification = verify_packing(p, budget.workers);
  return p;
}

}  // namespace apollo
