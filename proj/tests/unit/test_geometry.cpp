#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "apollo/packing.hpp"

using namespace apollo;

namespace {

struct CircleFixture : ::testing::Test {
  Case c = resolve_case(builtin_case("circle"));
  std::shared_ptr<const BoundaryChart> chart = make_chart(c);

  LatticeVector e(std::size_t i) const { return c.ctx.basis(i); }
  LatticeVector L() const { return c.named.at("L"); }
};

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_F(CircleFixture, CurvaturesOfBasisClasses) {
  EXPECT_EQ(curvature_sq(c.ctx, c.E(), e(0)), 8);
  EXPECT_EQ(curvature_sq(c.ctx, c.E(), e(1)), 8);
  EXPECT_EQ(curvature_sq(c.ctx, c.E(), e(2)), 0);
  EXPECT_EQ(curvature_sq(c.ctx, c.E(), L()), 0);
  EXPECT_THROW(curvature_sq(c.ctx, e(0), e(1)), DomainError);  // cusp must be null
  EXPECT_THROW(curvature_sq(c.ctx, c.E(), c.E()), DomainError);
}

TEST_F(CircleFixture, StripIsTheUnitStrip) {
  EXPECT_TRUE(chart->strip_mode());
  EXPECT_EQ(chart->scale_sq(), 2);
  const BoundarySphere bottom = chart->element(e(2)), top = chart->element(L());
  ASSERT_TRUE(bottom.is_flat());
  ASSERT_TRUE(top.is_flat());
  EXPECT_NEAR(bottom.line_normal[0], 0, 1e-12);
  EXPECT_NEAR(top.line_normal[0], 0, 1e-12);
  EXPECT_NEAR(bottom.line_offset / bottom.line_normal[1], 0, 1e-12);
  EXPECT_NEAR(top.line_offset / top.line_normal[1], 1, 1e-12);
  for (std::size_t i : {0u, 1u}) {
    const BoundarySphere s = chart->element(e(i));
    EXPECT_DOUBLE_EQ(s.curvature, 2);
    EXPECT_NEAR(s.radius, 0.5, 1e-12);
    EXPECT_NEAR(s.center[1], 0.5, 1e-12);
  }
  // e1 and e2 are tangent: centres one diameter apart
  EXPECT_NEAR(dist(chart->element(e(0)).center, chart->element(e(1)).center), 1.0, 1e-12);
}

TEST_F(CircleFixture, ClassifyPairs) {
  EXPECT_EQ(classify_pair(c.ctx, e(0), e(1)), PairClass::Tangent);
  EXPECT_EQ(classify_pair(c.ctx, e(2), L()), PairClass::Tangent);  // parallel lines meet at the cusp
  EXPECT_EQ(classify_pair(c.ctx, e(0), e(0)), PairClass::Intersecting);
  EXPECT_EQ(classify_pair(c.ctx, e(0), Integer(-2) * e(0)), PairClass::Intersecting);
  const LatticeVector n1 = c.named.at("n1"), n3 = c.named.at("n3");
  EXPECT_EQ(classify_pair(c.ctx, n1, n3), PairClass::Tangent);  // the parallel walls x=0, x=1/2
  EXPECT_EQ(classify_pair(c.ctx, n1, c.named.at("n2")), PairClass::Intersecting);
  EXPECT_THROW(classify_pair(c.ctx, c.E(), e(0)), DomainError);
}

TEST_F(CircleFixture, CanonicalSign) {
  const LatticeVector v{-2, 2, 0, -2};
  EXPECT_EQ(canonicalize(c.ctx, c.E(), v), (LatticeVector{1, -1, 0, 1}));
  EXPECT_EQ(canonicalize(c.ctx, c.E(), Integer(-1) * e(2)), e(2));
  EXPECT_THROW(canonicalize(c.ctx, c.E(), LatticeVector(4)), DomainError);
}

TEST(Descartes, KnownQuadruplesAndFailures) {
  EXPECT_TRUE(descartes_exact(std::vector<Integer>{-1, 2, 2, 3}, 2));
  EXPECT_TRUE(descartes_exact(std::vector<Integer>{0, 0, 1, 1}, 2));
  EXPECT_FALSE(descartes_exact(std::vector<Integer>{1, 2, 3, 4}, 2));
  // Soddy spheres: (sum)^2 = 3 sum of squares for 5 spheres in R^3
  EXPECT_TRUE(descartes_exact(std::vector<Integer>{0, 0, 1, 1, 1}, 3));
  EXPECT_TRUE(descartes_float({0.0, 0.0, 2.0, 2.0}, 2));
  EXPECT_FALSE(descartes_float({0.0, 0.0, 2.0, 2.1}, 2));
}

// Tangent classes give externally tangent circles, disjoint classes give separated circles.
TEST_F(CircleFixture, PairClassesMatchEuclideanGeometry) {
  OrbitBudget b;
  b.max_depth = 12;
  const auto rec = enumerate_orbit(c.ctx, c.E(), c.gamma(), e(2), b);
  std::vector<BoundarySphere> s;
  for (const auto& x : rec.elements) s.push_back(chart->element(x.normal));
  int tangent = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (s[i].is_flat() || s[j].is_flat()) continue;
      const double d = dist(s[i].center, s[j].center), r = s[i].radius + s[j].radius;
      const PairClass pc = classify_pair(c.ctx, s[i].normal, s[j].normal);
      if (pc == PairClass::Tangent) {
        EXPECT_NEAR(d, r, 1e-9 * r);
        ++tangent;
      } else {
        EXPECT_EQ(pc, PairClass::Disjoint);
        EXPECT_GT(d, r);
      }
    }
  EXPECT_GT(tangent, 10);
}

// Oracle: Euclidean inversion or reflection in the circle or line of each wall.
TEST_F(CircleFixture, ChartPointsAreEquivariant) {
  std::mt19937_64 rng(11);
  const auto gs = c.gamma();
  std::uniform_int_distribution<std::size_t> pick(0, gs.size() - 1);
  int checked = 0;
  for (int t = 0; t < 400; ++t) {
    RationalVector x = to_rational(chart->F());
    for (int i = 0; i < 6; ++i) x = gs.gens[pick(rng)].matrix.apply(x);
    const LatticeVector P = to_lattice(x);
    if (pair(c.ctx, P, c.E()) == 0) continue;
    const auto& g = gs.gens[pick(rng)];
    const LatticeVector Q = to_lattice(g.matrix.apply(to_rational(P)));
    if (pair(c.ctx, Q, c.E()) == 0) continue;
    const auto p = chart->chart_point(P), q = chart->chart_point(Q);
    const BoundarySphere w = chart->element(g.normal);
    std::vector<double> expect(2);
    if (w.is_flat()) {
      const double gg = w.line_normal[0] * w.line_normal[0] + w.line_normal[1] * w.line_normal[1];
      const double s = (p[0] * w.line_normal[0] + p[1] * w.line_normal[1] - w.line_offset) / gg;
      for (int i = 0; i < 2; ++i) expect[i] = p[i] - 2 * s * w.line_normal[i];
      // walls through the cusp also move sphere centres equivariantly
      const BoundarySphere img = chart->element(to_lattice(reflect(c.ctx, g.normal, e(0))));
      const auto c0 = chart->element(e(0)).center;
      const double s0 = (c0[0] * w.line_normal[0] + c0[1] * w.line_normal[1] - w.line_offset) / gg;
      EXPECT_NEAR(img.center[0], c0[0] - 2 * s0 * w.line_normal[0], 1e-9);
      EXPECT_NEAR(img.center[1], c0[1] - 2 * s0 * w.line_normal[1], 1e-9);
    } else {
      const double d2 = (p[0] - w.center[0]) * (p[0] - w.center[0]) + (p[1] - w.center[1]) * (p[1] - w.center[1]);
      for (int i = 0; i < 2; ++i) expect[i] = w.center[i] + w.radius * w.radius * (p[i] - w.center[i]) / d2;
    }
    EXPECT_NEAR(q[0], expect[0], 1e-9 * (1 + std::abs(expect[0])));
    EXPECT_NEAR(q[1], expect[1], 1e-9 * (1 + std::abs(expect[1])));
    ++checked;
  }
  EXPECT_GT(checked, 200);
}

TEST_F(CircleFixture, MetricMatchesChartDistances) {
  std::mt19937_64 rng(5);
  const auto gs = c.gamma();
  std::uniform_int_distribution<std::size_t> pick(0, gs.size() - 1);
  auto point = [&] {
    while (true) {
      RationalVector x = to_rational(chart->F());
      for (int i = 0; i < 5; ++i) x = gs.gens[pick(rng)].matrix.apply(x);
      const LatticeVector P = to_lattice(x);
      if (pair(c.ctx, P, c.E()) != 0) return P;
    }
  };
  for (int t = 0; t < 200; ++t) {
    const LatticeVector P = point(), Q = point();
    const double d = dist(chart->chart_point(P), chart->chart_point(Q));
    const double m = to_double(chart->metric_sq(P, Q));
    EXPECT_NEAR(d * d, m, 1e-10 * std::max(1.0, m));
  }
  EXPECT_THROW(chart->chart_point(e(0)), DomainError);   // not null
  EXPECT_THROW(chart->chart_point(c.E()), DomainError);  // the point at infinity
  EXPECT_THROW(chart->metric_sq(c.E(), chart->F()), DomainError);
}

TEST(Chart, PlainChartOfTheSphereCase) {
  const Case c = resolve_case(builtin_case("sphere"));
  const BoundaryChart plain(c.ctx, c.E());
  EXPECT_FALSE(plain.strip_mode());
  EXPECT_EQ(plain.chart_dim(), 3u);
  const auto chart = make_chart(c);
  EXPECT_TRUE(chart->strip_mode());
  EXPECT_EQ(chart->scale_sq(), 2);
  // e1..e3 are mutually tangent unit-diameter spheres between the planes X3 = 0 and X3 = 1
  std::vector<BoundarySphere> s;
  for (std::size_t i = 0; i < 3; ++i) s.push_back(chart->element(c.ctx.basis(i)));
  for (const auto& x : s) {
    EXPECT_NEAR(x.radius, 0.5, 1e-12);
    EXPECT_NEAR(x.center[2], 0.5, 1e-12);
  }
  EXPECT_NEAR(dist(s[0].center, s[1].center), 1, 1e-12);
  EXPECT_NEAR(dist(s[1].center, s[2].center), 1, 1e-12);
  EXPECT_THROW(BoundaryChart(c.ctx, c.ctx.basis(0)), DomainError);
  EXPECT_THROW(BoundaryChart(c.ctx, c.E(), c.ctx.basis(0), c.ctx.basis(1)), DomainError);
}
