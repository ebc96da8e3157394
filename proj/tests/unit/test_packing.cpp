#include <gtest/gtest.h>

#include <set>

#include "apollo/cusp_quotient.hpp"
#include "apollo/packing.hpp"

using namespace apollo;

namespace {

std::shared_ptr<const Case> circle_case() {
  static const auto c = std::make_shared<const Case>(resolve_case(builtin_case("circle")));
  return c;
}

Packing circle_packing(int depth, unsigned workers = 1) {
  OrbitBudget b;
  b.max_depth = depth;
  b.workers = workers;
  return build_packing(circle_case(), b);
}

std::vector<LatticeVector> normals_of(const Packing& p) {
  std::vector<LatticeVector> out;
  for (const auto& e : p.elements) out.push_back(e.normal);
  return out;
}

}  // namespace

TEST(Reconstruct, RebuildsTheCircleGram) {
  const CaseConfig cfg = builtin_case("circle");
  const auto r = reconstruct_gram(cfg);
  EXPECT_EQ(r.gram, cfg.gram);
  EXPECT_FALSE(r.steps.empty());
}

TEST(Reconstruct, InconsistentRulesAreRejected) {
  CaseConfig cfg = builtin_case("circle");
  cfg.reconstruct->cusp_on.push_back(0);  // e1 on the cusp contradicts the fibre tangency
  EXPECT_THROW(reconstruct_gram(cfg), ConfigError);

  cfg = builtin_case("circle");
  cfg.reconstruct->fiber_face.reset();
  EXPECT_THROW(reconstruct_gram(cfg), ConfigError);  // e1.e4 and e2.e4 left open

  cfg = builtin_case("circle");
  cfg.reconstruct.reset();
  EXPECT_THROW(reconstruct_gram(cfg), ConfigError);
}

TEST(Verify, CirclePackingPasses) {
  const Packing p = circle_packing(10);
  const auto& v = p.verification;
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.elements, p.elements.size());
  EXPECT_EQ(v.flat_elements, 2u);
  EXPECT_EQ(v.intersecting_pairs, 0u);
  EXPECT_EQ(v.norm_failures, 0u);
  EXPECT_GT(v.tangent_cliques, 0u);
  EXPECT_EQ(v.descartes_exact_failures, 0u);
  EXPECT_LE(v.max_descartes_defect, 1e-9);
}

TEST(Verify, DetectsInjectedFaults) {
  const Packing p = circle_packing(8);
  const auto& ctx = p.source->ctx;
  const LatticeVector E = p.chart->E();
  const auto base = normals_of(p);
  VerifyOptions opt;

  auto with = [&](const LatticeVector& extra) {
    auto ns = base;
    ns.push_back(extra);
    return verify_normals(ctx, E, p.chart->scale_sq(), ns, opt);
  };

  // wrong self-pairing
  const auto wrong_norm = with(LatticeVector{1, 1, 0, 0});
  EXPECT_FALSE(wrong_norm.pass);
  EXPECT_GT(wrong_norm.norm_failures, 0u);

  // duplicate: an element meets itself
  const auto dup = with(base[3]);
  EXPECT_FALSE(dup.pass);
  EXPECT_GT(dup.intersecting_pairs, 0u);

  // two walls of the group cross each other
  const auto& named = p.source->named;
  VerifyOptions walls;
  walls.expected_norm = -8;
  const auto cross = verify_normals(ctx, E, p.chart->scale_sq(), {named.at("n1"), named.at("n2")}, walls);
  EXPECT_FALSE(cross.pass);
  EXPECT_EQ(cross.intersecting_pairs, 1u);
  EXPECT_FALSE(cross.counterexamples.empty());
  // the same norm check rejects every -2 element
  EXPECT_EQ(verify_normals(ctx, E, p.chart->scale_sq(), base, walls).norm_failures, base.size());
}

TEST(Build, DeterministicAcrossWorkers) {
  const Packing a = circle_packing(14, 1), b = circle_packing(14, 3);
  EXPECT_EQ(normals_of(a), normals_of(b));
  EXPECT_EQ(a.verification.tangent_cliques, b.verification.tangent_cliques);
}

TEST(Build, SphereFirstLevels) {
  const auto c = std::make_shared<const Case>(resolve_case(builtin_case("sphere")));
  OrbitBudget b;
  b.max_depth = 8;
  const Packing p = build_packing(c, b);
  EXPECT_TRUE(p.verification.pass);
  EXPECT_EQ(p.verification.intersecting_pairs, 0u);
  for (const auto& e : p.elements)
    if (!e.is_flat()) EXPECT_NEAR(e.radius * e.curvature, 1.0, 1e-12);
}

TEST(Quotient, CircleHasOneTranslation) {
  const auto c = circle_case();
  const auto chart = make_chart(*c);
  const CuspQuotient q(c->ctx, *chart, c->gamma());
  EXPECT_EQ(q.translations().rank, 1);
  ASSERT_EQ(q.translations().matrices.size(), 1u);
  const GramContext& ctx = c->ctx;
  // translations fix the cusp and preserve the form
  const IntegerMatrix& T = q.translations().matrices[0];
  EXPECT_TRUE(preserves_form(ctx, to_rational(T)));
  const PackedVec e = PackedMat::from(T).apply(pack(c->E()));
  EXPECT_EQ(unpack(e, ctx.dim()), c->E());
}

TEST(Quotient, ReduceIsIdempotentAndTranslationInvariant) {
  const auto c = circle_case();
  const auto chart = make_chart(*c);
  const CuspQuotient q(c->ctx, *chart, c->gamma());
  const PackedMat T = PackedMat::from(q.translations().matrices[0]);
  const Packing p = circle_packing(10);
  for (const auto& e : p.elements) {
    const PackedVec y = pack(e.normal);
    const PackedVec r = q.reduce(y);
    EXPECT_EQ(q.reduce(r), r);
    EXPECT_EQ(q.reduce(T.apply(y)), r);
    EXPECT_EQ(q.reduce(T.apply(T.apply(y))), r);
  }
}

// Oracle: translation classes of a deep orbit, cut at the same height.
TEST(Quotient, EnumerationMatchesReducedOrbit) {
  const auto c = circle_case();
  const auto chart = make_chart(*c);
  const CuspQuotient q(c->ctx, *chart, c->gamma());
  const Integer H = 60;
  QuotientBudget b;
  b.max_h = H;
  const auto rec = q.enumerate(*c->face, b);
  EXPECT_EQ(rec.translation_rank, 1);
  EXPECT_EQ(rec.descent_violations, 0u);
  EXPECT_TRUE(std::is_sorted(rec.h.begin(), rec.h.end()));
  std::set<LatticeVector> got(rec.elements.begin(), rec.elements.end());
  EXPECT_EQ(got.size(), rec.elements.size());

  const Packing p = circle_packing(24);
  std::set<LatticeVector> want;
  for (const auto& e : p.elements)
    if (pair(c->ctx, e.normal, c->E()) <= H) want.insert(unpack(q.reduce(pack(e.normal)), c->ctx.dim()));
  EXPECT_EQ(got, want);
}
