#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "apollo/case_config.hpp"
#include "apollo/geometry.hpp"
#include "apollo/packed.hpp"
#include "apollo/parallel.hpp"

namespace apollo {

// ---------------------------------------------------------------- constraints

/// Linear pairing constraints n.c = 0, with an optional target self-pairing.
struct ConstraintSystem {
  const GramContext* ctx = nullptr;
  std::vector<LatticeVector> orthogonal_to;
  std::optional<Integer> norm_target;
};

namespace detail {

inline LatticeVector sign_fix(const GramContext& ctx, const LatticeVector& v) {
  if (ctx.has_cusp()) return canonicalize(ctx, ctx.cusp(), v);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) return v[i] < 0 ? -v : v;
  return v;
}

/// Integer basis of {x : x.c = 0 for all c}.
inline std::vector<LatticeVector> orthogonal_complement(const GramContext& ctx, const std::vector<LatticeVector>& cs) {
  const std::size_t k = ctx.dim();
  RationalMatrix a(cs.size(), k);
  for (std::size_t r = 0; r < cs.size(); ++r) {
    const LatticeVector jc = ctx.apply_gram(cs[r]);
    for (std::size_t j = 0; j < k; ++j) a(r, j) = jc[j];
  }
  std::vector<LatticeVector> out;
  for (const auto& v : nullspace(a)) out.push_back(clear_denominators(v));
  return out;
}

}  // namespace detail

/// Primitive integer solutions of the pairing system, one per nullspace direction.
inline std::vector<LatticeVector> solve_normal(const ConstraintSystem& sys) {
  if (!sys.ctx) throw DomainError("constraint system without lattice");
  const GramContext& ctx = *sys.ctx;
  for (const auto& c : sys.orthogonal_to) ctx.check(c);
  auto basis = detail::orthogonal_complement(ctx, sys.orthogonal_to);
  if (basis.empty()) throw NoSolution("constraints admit only the zero solution");
  std::vector<LatticeVector> out;
  for (auto& v : basis) {
    v = detail::sign_fix(ctx, v);
    if (!sys.norm_target) {
      out.push_back(v);
      continue;
    }
    const Integer nv = norm(ctx, v);
    if (nv == *sys.norm_target) {
      out.push_back(v);
    } else if (nv != 0 && *sys.norm_target % nv == 0) {
      Integer t;
      if (*sys.norm_target / nv > 0 && is_perfect_square(*sys.norm_target / nv, &t)) out.push_back(t * v);
    }
  }
  if (out.empty())
    throw NoSolution("no solution with self-pairing " + sys.norm_target->str() + " (solution space dimension " +
                     std::to_string(basis.size()) + ")");
  return out;
}

/// Null lattice points satisfying the linear constraints.
/// Order of attack: radical of the restricted form, then the binary quadratic,
/// then a bounded coefficient search.
inline std::vector<LatticeVector> null_point(const ConstraintSystem& sys, int search_height = 40) {
  if (!sys.ctx) throw DomainError("constraint system without lattice");
  const GramContext& ctx = *sys.ctx;
  for (const auto& c : sys.orthogonal_to) ctx.check(c);
  const auto w = detail::orthogonal_complement(ctx, sys.orthogonal_to);
  if (w.empty()) throw NoSolution("constraints admit only the zero solution");
  const std::size_t d = w.size();
  RationalMatrix g(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) g(i, j) = pair(ctx, w[i], w[j]);

  auto combine = [&](const std::vector<Integer>& coef) {
    LatticeVector v(ctx.dim());
    for (std::size_t i = 0; i < d; ++i) v += coef[i] * w[i];
    return v;
  };
  std::vector<LatticeVector> out;
  auto push = [&](LatticeVector v) {
    if (v.is_zero()) return;
    v = detail::sign_fix(ctx, v.primitive());
    if (norm(ctx, v) != 0) throw ArithmeticOverflow("internal: candidate null point is not null");
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };

  for (const auto& r : nullspace(g)) {
    const LatticeVector c = clear_denominators(r);
    push(combine(c.coords()));
  }
  if (!out.empty()) return out;

  if (d == 2) {
    const Integer a = numerator(g(0, 0)), b = numerator(g(0, 1)), c = numerator(g(1, 1));
    if (a == 0) {
      push(w[0]);
    } else {
      Integer s;
      if (is_perfect_square(b * b - a * c, &s)) {
        // x/y = (-b +- s)/a
        for (const Integer& root : {Integer(-b + s), Integer(-b - s)}) push(combine({root, a}));
      }
    }
    if (out.empty()) throw NoSolution("binary form has no rational isotropic vector");
    return out;
  }

  // bounded search, smallest height first
  const int hmax = d <= 3 ? search_height : std::min(search_height, 8);
  for (int h = 1; h <= hmax && out.empty(); ++h) {
    std::vector<int> c(d, -h);
    while (true) {
      int mx = 0;
      for (int x : c) mx = std::max(mx, std::abs(x));
      if (mx == h) {
        std::vector<Integer> coef(c.begin(), c.end());
        Rational q = 0;
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j) q += g(i, j) * coef[i] * coef[j];
        if (q == 0) push(combine(coef));
      }
      std::size_t i = 0;
      while (i < d && c[i] == h) c[i++] = -h;
      if (i == d) break;
      ++c[i];
    }
  }
  if (out.empty()) throw NoSolution("no null point up to coefficient height " + std::to_string(hmax));
  return out;
}

// ----------------------------------------------------------------- generators

enum class GeneratorRole { Wall, ExtraFace };

inline const char* to_string(GeneratorRole r) { return r == GeneratorRole::Wall ? "wall" : "extra-face"; }

struct NamedNormal {
  std::string name;
  LatticeVector normal;
  GeneratorRole role = GeneratorRole::Wall;
};

struct Generator {
  std::string name;
  LatticeVector normal;
  IsometryMatrix matrix;
  GeneratorRole role = GeneratorRole::Wall;
};

struct GeneratorSet {
  std::vector<Generator> gens;
  std::size_t size() const { return gens.size(); }
  std::vector<LatticeVector> normals() const {
    std::vector<LatticeVector> v;
    for (const auto& g : gens) v.push_back(g.normal);
    return v;
  }
};

struct GeneratorCheck {
  std::string name;
  LatticeVector normal;
  GeneratorRole role = GeneratorRole::Wall;
  Integer self_pairing;
  bool null = false;
  bool integral = false;
  bool form_preserved = false;
  bool involution = false;
  std::string note;
  bool ok() const { return !null && integral && form_preserved && involution; }
};

struct GeneratorReport {
  std::vector<GeneratorCheck> checks;
  std::vector<std::vector<Integer>> pairings;  // n_i . n_j
  bool pass = false;
};

inline GeneratorReport validate_generators(const GramContext& ctx, const std::vector<NamedNormal>& list) {
  GeneratorReport rep;
  rep.pass = !list.empty();
  for (const auto& nn : list) {
    GeneratorCheck c;
    c.name = nn.name;
    c.normal = nn.normal;
    c.role = nn.role;
    c.self_pairing = norm(ctx, nn.normal);
    if (c.self_pairing == 0) {
      c.null = true;
      c.note = "self-pairing 0: no reflection";
    } else {
      const IsometryMatrix m = reflection_matrix(ctx, nn.normal);
      c.integral = m.integral;
      if (m.integral != all_integer(m.entries)) c.note = "integrality verdict disagrees with entries";
      c.form_preserved = preserves_form(ctx, m.entries);
      c.involution = is_involution(m.entries);
      if (!c.integral) c.note = "reflection has non-integer entries";
    }
    rep.pass = rep.pass && c.ok();
    rep.checks.push_back(std::move(c));
  }
  for (const auto& a : list) {
    std::vector<Integer> row;
    for (const auto& b : list) row.push_back(pair(ctx, a.normal, b.normal));
    rep.pairings.push_back(std::move(row));
  }
  return rep;
}

inline Generator make_generator(const GramContext& ctx, const NamedNormal& nn) {
  Generator g;
  g.name = nn.name;
  g.role = nn.role;
  g.normal = detail::sign_fix(ctx, nn.normal.primitive());
  g.matrix = reflection_matrix(ctx, g.normal);
  if (!g.matrix.integral) throw ValidationFailure("generator " + nn.name + " = " + nn.normal.to_string() + " is not integral");
  return g;
}

inline GeneratorSet make_generator_set(const GramContext& ctx, const std::vector<NamedNormal>& list) {
  if (list.empty()) throw ValidationFailure("empty generator set");
  GeneratorSet gs;
  for (const auto& nn : list) gs.gens.push_back(make_generator(ctx, nn));
  return gs;
}

/// Reflection integrality for n = [1,...,1,1-m] in the rank m+2 family.
inline bool higher_dim_membership(int m) {
  if (m < 2) throw DomainError("membership criterion needs m >= 2");
  const CaseConfig cfg = dim_family_case(m);
  const GramContext ctx(cfg.gram);
  return reflection_matrix(ctx, cfg.printed.front().second).integral;
}

/// All primitive canonical vectors of coordinate height <= height whose self-pairing lies
/// in `norms` and whose reflection is integral.
inline std::vector<LatticeVector> discover_generators(const GramContext& ctx, int height,
                                                      const std::vector<long long>& norms) {
  const std::size_t k = ctx.dim();
  if (k > kMaxDim) throw DimensionMismatch("rank too large for discovery");
  std::vector<LatticeVector> out;
  std::vector<int> c(k, -height);
  const PackedMat J = PackedMat::from(ctx.gram());
  PackedVec je{};
  const bool cusp = ctx.has_cusp();
  if (cusp) je = J.apply(pack(ctx.cusp()));
  while (true) {
    PackedVec x;
    for (std::size_t i = 0; i < k; ++i) x.c[i] = c[i];
    const PackedVec jx = J.apply(x);
    const std::int64_t nx = dot(x, jx, k);
    if (nx < 0 && std::find(norms.begin(), norms.end(), nx) != norms.end()) {
      std::int64_t g = 0;
      for (std::size_t i = 0; i < k; ++i) g = gcd64(g, x.c[i]);
      bool integral = true;
      for (std::size_t i = 0; i < k && integral; ++i) integral = (2 * jx.c[i]) % nx == 0;
      const PackedVec canon = cusp ? canonical_packed(x, je, k) : x;
      if (g == 1 && integral && canon == x) out.push_back(unpack(x, k));
    }
    std::size_t i = 0;
    while (i < k && c[i] == height) c[i++] = -height;
    if (i == k) break;
    ++c[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

// -------------------------------------------------------------------- chamber

/// Signs eps_i so that eps_i eps_j n_i.n_j >= 0 off the diagonal, fixed by eps n.E > 0 on
/// walls not through the cusp. Throws ChamberError if the rule is inconsistent or ambiguous.
inline std::vector<int> inward_orientation(const GramContext& ctx, const LatticeVector& E,
                                           const std::vector<LatticeVector>& walls) {
  const std::size_t n = walls.size();
  std::vector<int> eps(n, 0);
  for (std::size_t start = 0; start < n; ++start) {
    if (eps[start] != 0) continue;
    // connected component through nonzero pairings
    std::vector<std::size_t> comp{start};
    std::vector<int> rel(n, 0);
    rel[start] = 1;
    for (std::size_t q = 0; q < comp.size(); ++q) {
      const std::size_t i = comp[q];
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const Integer p = pair(ctx, walls[i], walls[j]);
        if (p == 0) continue;
        const int want = p > 0 ? rel[i] : -rel[i];
        if (rel[j] == 0) {
          rel[j] = want;
          comp.push_back(j);
        } else if (rel[j] != want) {
          throw ChamberError("wall orientations are inconsistent (odd cycle of obtuse pairings)");
        }
      }
    }
    int fix = 0;
    for (std::size_t i : comp) {
      const Integer h = pair(ctx, walls[i], E);
      if (h == 0) continue;
      const int s = h > 0 ? rel[i] : -rel[i];
      if (fix == 0) fix = s;
      if (fix != s) throw ChamberError("walls not through the cusp disagree on orientation");
    }
    if (fix == 0) throw ChamberError("a group of walls all pass through the cusp; orientation is ambiguous");
    for (std::size_t i : comp) eps[i] = rel[i] * fix;
  }
  return eps;
}

struct ChamberVerdict {
  bool ok = false;
  std::string reason;
};

inline ChamberVerdict chamber_test(const GramContext& ctx, const LatticeVector& E, const LatticeVector& face,
                                   const std::vector<LatticeVector>& walls, const std::vector<int>& eps,
                                   const LatticeVector& D) {
  if (norm(ctx, D) <= 0) return {false, "D.D = " + norm(ctx, D).str() + " is not positive"};
  if (pair(ctx, D, E) <= 0) return {false, "D.E is not positive"};
  if (pair(ctx, D, face) <= 0) return {false, "D.face is not positive"};
  for (std::size_t i = 0; i < walls.size(); ++i) {
    const Integer p = pair(ctx, D, walls[i]) * eps[i];
    if (p <= 0)
      return {false, "D lies " + std::string(p == 0 ? "on" : "outside") + " wall " + walls[i].to_string()};
  }
  return {true, "inside"};
}

/// Smallest vector (by L1 norm, then lexicographic) passing the chamber test.
inline LatticeVector find_chamber_vector(const GramContext& ctx, const LatticeVector& E, const LatticeVector& face,
                                         const std::vector<LatticeVector>& walls, int max_l1 = 16) {
  const auto eps = inward_orientation(ctx, E, walls);
  const std::size_t k = ctx.dim();
  for (int l1 = 1; l1 <= max_l1; ++l1) {
    std::vector<LatticeVector> found;
    std::vector<int> c(k, -l1);
    while (true) {
      int s = 0;
      for (int x : c) s += std::abs(x);
      if (s == l1) {
        LatticeVector D(k);
        for (std::size_t i = 0; i < k; ++i) D[i] = c[i];
        if (chamber_test(ctx, E, face, walls, eps, D).ok) found.push_back(D);
      }
      std::size_t i = 0;
      while (i < k && c[i] == l1) c[i++] = -l1;
      if (i == k) break;
      ++c[i];
    }
    if (!found.empty()) return *std::min_element(found.begin(), found.end());
  }
  throw ChamberError("no chamber vector up to L1 norm " + std::to_string(max_l1));
}

// ---------------------------------------------------------------------- orbit

struct OrbitBudget {
  int max_depth = 6;
  std::optional<Rational> max_curvature_sq;
  std::size_t max_elements = 5'000'000;
  unsigned workers = 1;
};

struct OrbitElement {
  LatticeVector normal;
  Integer pairing_E;  // E.n
  Rational curvature_sq;
  std::vector<int> word;
  int depth = 0;
};

struct OrbitRecord {
  std::vector<OrbitElement> elements;  // sorted by (E.n, coordinates)
  std::vector<std::size_t> level_sizes;
  std::size_t excluded_by_curvature = 0;
  int depth_reached = 0;
  bool closed = false;  // the last level produced nothing new
  std::string truncation;
};

namespace detail {

struct Candidate {
  PackedVec v;
  std::vector<int> word;
};

/// Sharded insert-if-absent map that keeps the lexicographically smallest word.
class ShardedLevel {
 public:
  explicit ShardedLevel(std::size_t shards = 64) : shards_(shards) {}

  void offer(const PackedVec& v, std::vector<int> word) {
    Shard& s = shards_[PackedVecHash{}(v) % shards_.size()];
    std::lock_guard<std::mutex> lock(s.mu);
    auto [it, inserted] = s.map.try_emplace(v, word);
    if (!inserted && word < it->second) it->second = std::move(word);
  }

  std::vector<Candidate> drain() {
    std::vector<Candidate> out;
    for (auto& s : shards_)
      for (auto& [k, w] : s.map) out.push_back({k, std::move(w)});
    return out;
  }

 private:
  struct Shard {
    std::mutex mu;
    std::unordered_map<PackedVec, std::vector<int>, PackedVecHash> map;
  };
  std::vector<Shard> shards_;
};

}  // namespace detail

/// Breadth-first closure of the seed under the generators, deduplicated by canonical form.
inline OrbitRecord enumerate_orbit(const GramContext& ctx, const LatticeVector& E, const GeneratorSet& gs,
                                   const LatticeVector& seed, const OrbitBudget& budget) {
  if (gs.gens.empty()) throw DomainError("empty generator set");
  const std::size_t k = ctx.dim();
  const Integer seed_norm = norm(ctx, seed);
  if (seed_norm >= 0) throw DomainError("seed " + seed.to_string() + " is not spacelike");
  if (budget.max_depth < 0) throw ConfigError("max_depth must be nonnegative");

  const PackedMat J = PackedMat::from(ctx.gram());
  const PackedVec je = J.apply(pack(E));
  std::vector<PackedMat> mats;
  for (const auto& g : gs.gens) {
    if (!g.matrix.integral) throw ValidationFailure("generator " + g.name + " is not integral");
    mats.push_back(PackedMat::from(g.matrix.integer_entries()));
  }
  const std::int64_t neg_norm = to_int64(-seed_norm);
  i128 cap_num = 0, cap_den = 1;
  if (budget.max_curvature_sq) {
    cap_num = to_int64(numerator(*budget.max_curvature_sq));
    cap_den = to_int64(denominator(*budget.max_curvature_sq));
  }
  auto within = [&](const PackedVec& v) {
    if (!budget.max_curvature_sq) return true;
    const i128 h = dot_wide(je, v, k);
    return h * h * cap_den <= cap_num * neg_norm;
  };
  auto less = [&](const detail::Candidate& a, const detail::Candidate& b) {
    const i128 ha = dot_wide(je, a.v, k), hb = dot_wide(je, b.v, k);
    if (ha != hb) return ha < hb;
    return a.v < b.v;
  };

  OrbitRecord rec;
  std::unordered_map<PackedVec, std::pair<int, std::vector<int>>, PackedVecHash> seen;
  const PackedVec s0 = canonical_packed(pack(seed), je, k);
  std::vector<detail::Candidate> frontier;
  if (within(s0)) {
    frontier.push_back({s0, {}});
    seen.emplace(s0, std::make_pair(0, std::vector<int>{}));
  } else {
    rec.excluded_by_curvature = 1;
  }
  rec.level_sizes.push_back(frontier.size());

  int depth = 0;
  while (depth < budget.max_depth && !frontier.empty()) {
    detail::ShardedLevel next;
    std::vector<std::size_t> excl(frontier.size(), 0);
    parallel_for(frontier.size(), budget.workers, [&](std::size_t i) {
      const auto& f = frontier[i];
      for (std::size_t g = 0; g < mats.size(); ++g) {
        if (!f.word.empty() && f.word.back() == static_cast<int>(g)) continue;
        const PackedVec y = canonical_packed(mats[g].apply(f.v), je, k);
        if (!within(y)) {
          ++excl[i];
          continue;
        }
        if (seen.count(y)) continue;
        std::vector<int> w = f.word;
        w.push_back(static_cast<int>(g));
        next.offer(y, std::move(w));
      }
    });
    for (auto e : excl) rec.excluded_by_curvature += e;
    auto level = next.drain();
    std::sort(level.begin(), level.end(), less);
    ++depth;
    if (seen.size() + level.size() > budget.max_elements)
      throw BudgetExceeded("orbit exceeds " + std::to_string(budget.max_elements) + " elements at depth " +
                           std::to_string(depth) + " (complete through depth " + std::to_string(depth - 1) + ")");
    for (const auto& c : level) seen.emplace(c.v, std::make_pair(depth, c.word));
    rec.level_sizes.push_back(level.size());
    frontier = std::move(level);
  }
  rec.depth_reached = depth;
  rec.closed = frontier.empty();
  rec.truncation = rec.closed ? "closed" : "max_depth=" + std::to_string(budget.max_depth);
  if (budget.max_curvature_sq) rec.truncation += ", max_curvature_sq=" + to_string(*budget.max_curvature_sq);

  std::vector<detail::Candidate> all;
  all.reserve(seen.size());
  for (const auto& [v, dw] : seen) all.push_back({v, dw.second});
  std::sort(all.begin(), all.end(), less);
  rec.elements.reserve(all.size());
  for (const auto& c : all) {
    OrbitElement e;
    e.normal = unpack(c.v, k);
    e.pairing_E = Integer(static_cast<long long>(dot(je, c.v, k)));
    e.curvature_sq = ratio(e.pairing_E * e.pairing_E, -seed_norm);
    e.depth = seen.at(c.v).first;
    e.word = c.word;
    rec.elements.push_back(std::move(e));
  }
  return rec;
}

// ---------------------------------------------------------------- case setup

struct DerivationResult {
  std::string name;
  std::string kind;
  std::vector<std::string> constraints;
  std::vector<LatticeVector> solutions;
  LatticeVector value;
  Integer self_pairing;
  std::optional<Integer> norm_target;
  std::optional<bool> integral;  // normals only
  std::optional<LatticeVector> printed;
  bool matches_printed = false;
};

/// A case with every derived vector solved and the generator sets assembled.
struct Case {
  CaseConfig cfg;
  GramContext ctx;
  std::map<std::string, LatticeVector> named;  // basis, vectors, derived
  std::vector<DerivationResult> derivations;
  std::vector<NamedNormal> wall_list;     // solver-derived walls of Gamma
  std::vector<NamedNormal> printed_list;  // printed walls as given
  std::vector<NamedNormal> extra_list;    // -2 faces of the larger group
  std::optional<LatticeVector> face;
  std::optional<std::pair<LatticeVector, LatticeVector>> strip;

  bool has_cusp() const { return ctx.has_cusp(); }
  LatticeVector E() const { return ctx.cusp(); }
  GeneratorSet gamma() const { return make_generator_set(ctx, wall_list); }
  int boundary_dim() const { return static_cast<int>(ctx.dim()) - 2; }

  LatticeVector eval(const VectorExpr& e) const {
    if (e.literal) {
      LatticeVector v(*e.literal);
      ctx.check(v);
      return v;
    }
    LatticeVector v(ctx.dim());
    for (const auto& [coef, name] : e.terms) {
      auto it = named.find(name);
      if (it == named.end()) throw ConfigError("unknown vector '" + name + "' in '" + e.text + "'");
      v += coef * it->second;
    }
    return v;
  }
};

inline Case resolve_case(const CaseConfig& cfg) {
  Case c{cfg, GramContext(cfg.gram, cfg.cusp), {}, {}, {}, {}, {}, {}, {}};
  for (std::size_t i = 0; i < cfg.dim; ++i) c.named["e" + std::to_string(i + 1)] = c.ctx.basis(i);
  for (const auto& [name, expr] : cfg.vectors) c.named[name] = c.eval(expr);

  std::map<std::string, LatticeVector> printed(cfg.printed.begin(), cfg.printed.end());
  for (const auto& d : cfg.derivations) {
    ConstraintSystem sys{&c.ctx, {}, d.norm_target};
    DerivationResult r;
    r.name = d.name;
    r.kind = d.kind == Derivation::Kind::Normal ? "normal" : "null";
    for (const auto& e : d.orthogonal_to) {
      sys.orthogonal_to.push_back(c.eval(e));
      r.constraints.push_back(e.text);
    }
    r.norm_target = d.norm_target;
    if (d.kind == Derivation::Kind::Normal) {
      r.solutions = solve_normal(sys);
      if (r.solutions.size() != 1)
        throw ConfigError("constraints for " + d.name + " leave " + std::to_string(r.solutions.size()) +
                          " independent solutions");
      r.value = r.solutions.front();
      r.integral = reflection_is_integral(c.ctx, r.value);
    } else {
      r.solutions = null_point(sys);
      r.value = r.solutions.front();
    }
    r.self_pairing = norm(c.ctx, r.value);
    if (auto it = printed.find(d.name); it != printed.end()) {
      r.printed = it->second;
      r.matches_printed = it->second == r.value || it->second == -r.value;
    }
    c.named[d.name] = r.value;
    c.derivations.push_back(std::move(r));
  }
  for (const auto& w : cfg.walls) {
    auto it = c.named.find(w);
    if (it == c.named.end()) throw ConfigError("unknown wall '" + w + "'");
    c.wall_list.push_back({w, it->second, GeneratorRole::Wall});
  }
  for (const auto& w : cfg.extra) {
    auto it = c.named.find(w);
    if (it == c.named.end()) throw ConfigError("unknown extra face '" + w + "'");
    c.extra_list.push_back({w, it->second, GeneratorRole::ExtraFace});
  }
  // printed entries named n* are walls; others (points) are only reported
  for (const auto& [name, v] : cfg.printed)
    if (name.rfind("n", 0) == 0) c.printed_list.push_back({name, v, GeneratorRole::Wall});
  if (cfg.face) c.face = c.ctx.basis(*cfg.face);
  if (cfg.strip) c.strip = std::make_pair(c.eval(cfg.strip->first), c.eval(cfg.strip->second));
  return c;
}

}  // namespace apollo
