#include <gtest/gtest.h>

#include <set>

#include "apollo/packing.hpp"

using namespace apollo;

namespace {

const Case& circle() {
  static const Case c = resolve_case(builtin_case("circle"));
  return c;
}
const Case& sphere() {
  static const Case c = resolve_case(builtin_case("sphere"));
  return c;
}

std::vector<LatticeVector> walls_of(const Case& c) {
  std::vector<LatticeVector> out;
  for (const auto& w : c.wall_list) out.push_back(w.normal);
  return out;
}

// Every image of the seed under words of length <= depth, reflected one wall at a time on rationals.
std::set<LatticeVector> word_oracle(const Case& c, const LatticeVector& seed, int depth) {
  std::set<LatticeVector> all{canonicalize(c.ctx, c.E(), seed)};
  std::set<LatticeVector> level = all;
  for (int d = 0; d < depth; ++d) {
    std::set<LatticeVector> next;
    for (const auto& x : level)
      for (const auto& w : c.wall_list) {
        const LatticeVector y = canonicalize(c.ctx, c.E(), to_lattice(reflect(c.ctx, w.normal, x)));
        if (all.insert(y).second) next.insert(y);
      }
    level = std::move(next);
  }
  return all;
}

}  // namespace

TEST(Solver, CircleWallsFromConstraints) {
  const Case& c = circle();
  const std::map<std::string, LatticeVector> want{
      {"n1", {1, -1, 0, 1}}, {"n2", {0, 0, 2, -1}}, {"n3", {1, -1, 0, 0}}, {"n4", {1, 0, 1, -1}}};
  for (const auto& [name, v] : want) {
    EXPECT_EQ(c.named.at(name), v) << name;
    EXPECT_EQ(norm(c.ctx, v), -8);
  }
  for (const auto& d : c.derivations) {
    if (d.kind != "normal") continue;
    ASSERT_FALSE(d.solutions.empty()) << d.name;
    for (const auto& s : d.solutions) {
      EXPECT_EQ(s.content(), 1);
      if (d.norm_target) EXPECT_EQ(norm(c.ctx, s), *d.norm_target);
    }
  }
}

TEST(Solver, SphereWallsAndNullPoint) {
  const Case& c = sphere();
  EXPECT_EQ(c.named.at("n3"), (LatticeVector{1, 1, -2, 0, 1}));
  EXPECT_EQ(norm(c.ctx, c.named.at("n3")), -24);
  EXPECT_EQ(c.named.at("n5"), (LatticeVector{1, 0, 0, 1, -1}));
  EXPECT_EQ(norm(c.ctx, c.named.at("n5")), -8);
  const LatticeVector P = c.named.at("P");
  EXPECT_EQ(P, (LatticeVector{1, 0, 0, -1, 1}));
  EXPECT_EQ(norm(c.ctx, P), 0);
}

TEST(Solver, OverdeterminedAndEmptySystems) {
  const GramContext& ctx = circle().ctx;
  ConstraintSystem sys{&ctx, {ctx.basis(0), ctx.basis(1), ctx.basis(2), ctx.basis(3)}, std::nullopt};
  EXPECT_THROW(solve_normal(sys), NoSolution);
  EXPECT_THROW(null_point(sys), NoSolution);
  EXPECT_THROW(solve_normal(ConstraintSystem{}), DomainError);
  // a norm target no primitive solution reaches
  ConstraintSystem odd{&ctx, {ctx.basis(0), ctx.basis(1), ctx.basis(3)}, Integer(-6)};
  EXPECT_THROW(solve_normal(odd), NoSolution);
  ConstraintSystem line{&ctx, {ctx.basis(0), ctx.basis(1), ctx.basis(3)}, std::nullopt};
  const auto sol = solve_normal(line);
  ASSERT_EQ(sol.size(), 1u);
  for (std::size_t i : {0u, 1u, 3u}) EXPECT_EQ(pair(ctx, sol[0], ctx.basis(i)), 0);
}

TEST(Generators, DerivedPassPrintedFail) {
  const Case& c = circle();
  const auto ok = validate_generators(c.ctx, c.wall_list);
  EXPECT_TRUE(ok.pass);
  for (const auto& chk : ok.checks) EXPECT_TRUE(chk.ok()) << chk.name;
  const auto bad = validate_generators(c.ctx, c.printed_list);
  EXPECT_FALSE(bad.pass);
  bool null_flagged = false;
  for (const auto& chk : bad.checks)
    if (chk.normal == LatticeVector{1, 0, -1, 1}) null_flagged = chk.null && !chk.ok();
  EXPECT_TRUE(null_flagged);
  EXPECT_THROW(packing_generators(c, GeneratorChoice::Printed), ValidationFailure);
  // Gram of the walls: -8 on the diagonal
  for (std::size_t i = 0; i < ok.pairings.size(); ++i) EXPECT_EQ(ok.pairings[i][i], -8);
}

// Oracle: the reflection in the printed normal, built entry by entry on rationals.
TEST(Generators, HigherDimensionalMembership) {
  for (int m = 2; m <= 8; ++m) {
    const CaseConfig cfg = dim_family_case(m);
    const GramContext ctx(cfg.gram);
    const LatticeVector n = cfg.printed.front().second;
    const std::size_t k = ctx.dim();
    const Integer nn = norm(ctx, n);
    bool integral = true;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        Integer jn = 0;
        for (std::size_t a = 0; a < k; ++a) jn += ctx.gram()(j, a) * n[a];
        const Rational r = Rational(i == j ? 1 : 0) - Rational(2 * n[i] * jn) / Rational(nn);
        if (denominator(r) != 1) integral = false;
      }
    EXPECT_EQ(higher_dim_membership(m), integral) << "m = " << m;
  }
  EXPECT_TRUE(higher_dim_membership(3));
  EXPECT_FALSE(higher_dim_membership(4));
}

TEST(Chamber, CircleChamberVector) {
  const Case& c = circle();
  const auto walls = walls_of(c);
  const auto eps = inward_orientation(c.ctx, c.E(), walls);
  const LatticeVector D = find_chamber_vector(c.ctx, c.E(), *c.face, walls);
  EXPECT_EQ(D, (LatticeVector{2, 1, 1, 3}));
  EXPECT_EQ(norm(c.ctx, D), 80);
  EXPECT_TRUE(chamber_test(c.ctx, c.E(), *c.face, walls, eps, D).ok);
  const auto bad = chamber_test(c.ctx, c.E(), *c.face, walls, eps, LatticeVector{1, 1, 1, 1});
  EXPECT_FALSE(bad.ok);
  EXPECT_FALSE(bad.reason.empty());
  // inward signs: every wall pairs positively with D after orientation
  for (std::size_t i = 0; i < walls.size(); ++i) EXPECT_GT(pair(c.ctx, D, walls[i]) * eps[i], 0);
}

TEST(Chamber, SphereChamberVector) {
  const Case& c = sphere();
  const LatticeVector D = find_chamber_vector(c.ctx, c.E(), *c.face, walls_of(c));
  EXPECT_EQ(D, (LatticeVector{3, 2, 1, 1, 4}));
  EXPECT_GT(norm(c.ctx, D), 0);
}

TEST(Orbit, MatchesWordEnumeration) {
  for (const Case* c : {&circle(), &sphere()}) {
    for (int depth = 0; depth <= 5; ++depth) {
      OrbitBudget b;
      b.max_depth = depth;
      const auto rec = enumerate_orbit(c->ctx, c->E(), c->gamma(), *c->face, b);
      std::set<LatticeVector> got;
      for (const auto& e : rec.elements) got.insert(e.normal);
      EXPECT_EQ(got.size(), rec.elements.size());
      EXPECT_EQ(got, word_oracle(*c, *c->face, depth)) << c->cfg.name << " depth " << depth;
      // stored words reproduce the element
      for (const auto& e : rec.elements) {
        LatticeVector x = *c->face;
        for (int g : e.word) x = to_lattice(reflect(c->ctx, c->wall_list[g].normal, x));
        EXPECT_EQ(canonicalize(c->ctx, c->E(), x), e.normal);
        EXPECT_EQ(static_cast<int>(e.word.size()), e.depth);
        EXPECT_EQ(e.curvature_sq, curvature_sq(c->ctx, c->E(), e.normal));
      }
    }
  }
}

TEST(Orbit, FirstLevelsOfTheCirclePacking) {
  const Case& c = circle();
  OrbitBudget b;
  b.max_depth = 1;
  auto rec = enumerate_orbit(c.ctx, c.E(), c.gamma(), *c.face, b);
  ASSERT_EQ(rec.elements.size(), 2u);  // the two boundary lines
  for (const auto& e : rec.elements) EXPECT_EQ(e.curvature_sq, 0);
  b.max_depth = 2;
  rec = enumerate_orbit(c.ctx, c.E(), c.gamma(), *c.face, b);
  std::size_t circles = 0;
  for (const auto& e : rec.elements)
    if (e.curvature_sq != 0) {
      EXPECT_EQ(e.curvature_sq, 8);  // curvature 2 in the unit strip
      ++circles;
    }
  EXPECT_GT(circles, 0u);
}

TEST(Orbit, CurvatureCapIsExact) {
  const Case& c = circle();
  OrbitBudget b;
  b.max_depth = 14;
  const auto full = enumerate_orbit(c.ctx, c.E(), c.gamma(), *c.face, b);
  b.max_curvature_sq = Rational(8 * 36);
  const auto capped = enumerate_orbit(c.ctx, c.E(), c.gamma(), *c.face, b);
  for (const auto& e : capped.elements) EXPECT_LE(e.curvature_sq, *b.max_curvature_sq);
  EXPECT_LT(capped.elements.size(), full.elements.size());
  EXPECT_GT(capped.excluded_by_curvature, 0u);
}

TEST(Orbit, WorkerCountDoesNotChangeTheResult) {
  const Case& c = circle();
  OrbitBudget b;
  b.max_depth = 12;
  b.workers = 1;
  const auto one = enumerate_orbit(c.ctx, c.E(), c.gamma(), *c.face, b);
  b.workers = 4;
  const auto four = enumerate_orbit(c.ctx, c.E(), c.gamma(), *c.face, b);
  ASSERT_EQ(one.elements.size(), four.elements.size());
  for (std::size_t i = 0; i < one.elements.size(); ++i) {
    EXPECT_EQ(one.elements[i].normal, four.elements[i].normal);
    EXPECT_EQ(one.elements[i].word, four.elements[i].word);
  }
  EXPECT_EQ(one.level_sizes, four.level_sizes);
}

TEST(Orbit, BudgetAndBadInputs) {
  const Case& c = circle();
  OrbitBudget b;
  b.max_depth = 30;
  b.max_elements = 100;
  EXPECT_THROW(enumerate_orbit(c.ctx, c.E(), c.gamma(), *c.face, b), BudgetExceeded);
  b.max_depth = -1;
  EXPECT_THROW(enumerate_orbit(c.ctx, c.E(), c.gamma(), *c.face, b), ConfigError);
  b.max_depth = 2;
  EXPECT_THROW(enumerate_orbit(c.ctx, c.E(), c.gamma(), c.E(), b), DomainError);
  EXPECT_THROW(enumerate_orbit(c.ctx, c.E(), GeneratorSet{}, *c.face, b), DomainError);
}
