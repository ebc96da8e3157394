#include <gtest/gtest.h>

#include <random>

#include "apollo/case_config.hpp"
#include "apollo/lattice.hpp"

using namespace apollo;

namespace {

GramContext circle_ctx() { return GramContext(builtin_case("circle").gram, 3); }
GramContext sphere_ctx() { return GramContext(builtin_case("sphere").gram, 4); }

}  // namespace

TEST(Exact, FloorDivRoundsDown) {
  EXPECT_EQ(floor_div(7, 2), 3);
  EXPECT_EQ(floor_div(-7, 2), -4);
  EXPECT_EQ(floor_div(7, -2), -4);
  EXPECT_EQ(floor_div(-8, 2), -4);
  EXPECT_EQ(floor(ratio(-1, 3)), -1);
}

TEST(Exact, RatioAcceptsNegativeDenominator) {
  EXPECT_EQ(ratio(3, -6), Rational(-1, 2));
  EXPECT_EQ(ratio(-3, -6), Rational(1, 2));
  EXPECT_THROW(ratio(1, 0), DomainError);
}

TEST(Exact, IsqrtAndSquares) {
  for (long long n = 0; n < 2000; ++n) {
    const Integer r = isqrt(n);
    EXPECT_LE(r * r, n);
    EXPECT_GT((r + 1) * (r + 1), n);
  }
  Integer root;
  EXPECT_TRUE(is_perfect_square(Integer(1) << 80, &root));
  EXPECT_EQ(root, Integer(1) << 40);
  EXPECT_FALSE(is_perfect_square(-4));
  Rational q;
  EXPECT_TRUE(rational_sqrt(Rational(9, 4), &q));
  EXPECT_EQ(q, Rational(3, 2));
  EXPECT_FALSE(rational_sqrt(Rational(2), &q));
}

TEST(Exact, Int64NarrowingThrowsOverflow) {
  EXPECT_EQ(to_int64(Integer(-5)), -5);
  EXPECT_THROW(to_int64(Integer(1) << 70), ArithmeticOverflow);
}

TEST(Matrix, InverseAndNullspace) {
  RationalMatrix a = to_rational(IntegerMatrix{{2, 1}, {1, 1}});
  EXPECT_EQ(a * inverse(a), RationalMatrix::identity(2));
  EXPECT_THROW(inverse(to_rational(IntegerMatrix{{1, 2}, {2, 4}})), NoSolution);
  const auto ns = nullspace(to_rational(IntegerMatrix{{1, 1, 0}, {0, 1, 1}}));
  ASSERT_EQ(ns.size(), 1u);
  EXPECT_EQ(ns[0][0] + ns[0][1], 0);
  EXPECT_EQ(ns[0][1] + ns[0][2], 0);
  EXPECT_EQ(rank(to_rational(IntegerMatrix{{1, 2}, {2, 4}})), 1u);
}

TEST(Lattice, VectorArithmetic) {
  LatticeVector v{4, -6, 2};
  EXPECT_EQ(v.content(), 2);
  EXPECT_EQ(v.primitive(), (LatticeVector{2, -3, 1}));
  EXPECT_EQ(v + v, Integer(2) * v);
  EXPECT_EQ(v.to_string(), "[4, -6, 2]");
}

TEST(Lattice, SignatureOfTheCases) {
  EXPECT_EQ(circle_ctx().signature(), (Signature{1, 3, 0}));
  EXPECT_EQ(sphere_ctx().signature(), (Signature{1, 4, 0}));
  EXPECT_EQ(GramContext(dim_family_case(6).gram).signature(), (Signature{1, 7, 0}));
}

TEST(Lattice, RejectsBadGramMatrices) {
  EXPECT_THROW(GramContext(IntegerMatrix{{-2, 1}, {0, 2}}), ConfigError);      // not symmetric
  EXPECT_THROW(GramContext(IntegerMatrix{{-1, 0}, {0, 2}}), ConfigError);      // odd diagonal
  EXPECT_THROW(GramContext(IntegerMatrix{{-2, 0}, {0, -2}}), ConfigError);     // negative definite
  EXPECT_THROW(GramContext(IntegerMatrix{{2, 0}, {0, 2}}), ConfigError);       // positive definite
  EXPECT_THROW(GramContext(builtin_case("circle").gram, 0), ConfigError);     // cusp not null
  EXPECT_THROW(GramContext(IntegerMatrix{{0, 1}, {1, 0}, {0, 0}}), ConfigError);  // not square
}

TEST(Lattice, PairingMatchesGram) {
  const auto ctx = circle_ctx();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(pair(ctx, ctx.basis(i), ctx.basis(j)), ctx.gram()(i, j));
  EXPECT_THROW(pair(ctx, LatticeVector{1, 2}, ctx.basis(0)), DimensionMismatch);
}

TEST(Reflection, NullNormalThrows) {
  const auto ctx = circle_ctx();
  EXPECT_THROW(reflect(ctx, ctx.basis(3), ctx.basis(0)), NullNormal);
  EXPECT_THROW(reflection_matrix(ctx, LatticeVector{1, 0, -1, 1}), NullNormal);
}

TEST(Reflection, DerivedCircleWallsAreIntegral) {
  const auto ctx = circle_ctx();
  for (const LatticeVector& n :
       {LatticeVector{1, -1, 0, 1}, LatticeVector{0, 0, 2, -1}, LatticeVector{1, -1, 0, 0}, LatticeVector{1, 0, 1, -1}}) {
    EXPECT_EQ(norm(ctx, n), -8);
    EXPECT_TRUE(reflection_is_integral(ctx, n)) << n.to_string();
  }
  EXPECT_FALSE(reflection_is_integral(ctx, LatticeVector{2, -2, 0, 1}));
}

// Random property test; the oracle is the textbook formula on rationals, entry by entry.
TEST(Reflection, RandomNormalsAreIsometricInvolutions) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coef(-5, 5);
  for (const auto& ctx : {circle_ctx(), sphere_ctx()}) {
    const std::size_t k = ctx.dim();
    int tested = 0;
    while (tested < 300) {
      LatticeVector n(k), x(k);
      for (std::size_t i = 0; i < k; ++i) {
        n[i] = coef(rng);
        x[i] = coef(rng);
      }
      if (norm(ctx, n) == 0) continue;
      ++tested;
      const IsometryMatrix m = reflection_matrix(ctx, n);
      EXPECT_TRUE(is_involution(m.entries));
      EXPECT_TRUE(preserves_form(ctx, m.entries));
      EXPECT_EQ(m.integral, all_integer(m.entries)) << n.to_string();
      // R x = x - 2 (x.n)/(n.n) n
      const Rational f = Rational(2 * pair(ctx, x, n)) / Rational(norm(ctx, n));
      const RationalVector rx = m.apply(to_rational(x));
      for (std::size_t i = 0; i < k; ++i) EXPECT_EQ(rx[i], Rational(x[i]) - f * Rational(n[i]));
      EXPECT_EQ(reflect(ctx, n, x), rx);
      // scaling n does not change the reflection
      EXPECT_EQ(reflection_matrix(ctx, Integer(3) * n).entries, m.entries);
      EXPECT_EQ(reflection_is_integral(ctx, Integer(3) * n), m.integral);
    }
  }
}

TEST(Reflection, PreservesFormRejectsNonIsometry) {
  const auto ctx = circle_ctx();
  RationalMatrix m = RationalMatrix::identity(4);
  m(0, 1) = 1;
  EXPECT_FALSE(preserves_form(ctx, m));
  EXPECT_FALSE(is_involution(m));
}
