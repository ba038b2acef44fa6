#include <gtest/gtest.h>

#include "support.hpp"

using namespace mfsing;
using namespace testing_support;

TEST(Germ, MustVanishAtOrigin) {
  Ring r = ring_of({"z0"});
  EXPECT_THROW(Germ(P(r, "1 + z0^2")), Error);
  EXPECT_NO_THROW(Germ(P(r, "z0")));
}

TEST(MilnorNumber, Examples) {
  Ring one = ring_of({"z0"});
  Ring two = ring_of({"z0", "z1"});
  EXPECT_EQ(milnor_number(G(one, "z0^3")), Dimension(2));
  EXPECT_EQ(milnor_number(G(two, "z0^3 + z1^3")), Dimension(4));
  EXPECT_EQ(milnor_number(G(two, "z0^2*z1")), Dimension());
  EXPECT_EQ(oracle::milnor(oracle::make({{1, {3, 0}}, {1, {0, 3}}}), 2, 12), 4u);
}

TEST(MilnorNumber, LocalNotGlobal) {
  // z^2 + z^3 has critical points 0 and -2/3; only the origin counts.
  Ring z = ring_of({"z"});
  EXPECT_EQ(milnor_number(G(z, "z^2 + z^3")), Dimension(1));
}

TEST(TyurinaAlgebra, Examples) {
  Ring one = ring_of({"z0"});
  Ring two = ring_of({"z0", "z1"});
  auto t1 = tyurina_algebra(G(one, "z0^3"));
  EXPECT_EQ(t1.tau, 2u);
  EXPECT_EQ(t1.hilbert.values, (std::vector<std::size_t>{1, 1}));
  auto t2 = tyurina_algebra(G(two, "z0^3 + z1^3"));
  EXPECT_EQ(t2.tau, 4u);
  auto t3 = tyurina_algebra(G(one, "z0^4"));
  EXPECT_EQ(t3.tau, 3u);
  EXPECT_EQ(t3.hilbert.values, (std::vector<std::size_t>{1, 1, 1}));
  EXPECT_THROW(tyurina_algebra(G(two, "z0^2*z1")), Error);
}

TEST(TyurinaNumber, Examples) {
  Ring one = ring_of({"z0"});
  Ring two = ring_of({"z0", "z1"});
  EXPECT_EQ(tyurina_number(G(one, "z0^3")), Dimension(2));
  EXPECT_EQ(tyurina_number(G(one, "z0^2")), Dimension(1));
  EXPECT_EQ(tyurina_number(G(two, "z0^2*z1")), Dimension());
}

TEST(TyurinaAlgebra, StructureIsConsistent) {
  Ring two = ring_of({"z0", "z1"});
  for (const char* f : {"z0^3 + z1^4", "z0^2*z1 + z1^5", "z0^4 + z1^5 + z0^2*z1^2"}) {
    auto t = tyurina_algebra(G(two, f));
    ASSERT_EQ(t.basis.monomials.size(), t.tau);
    EXPECT_GE(t.socle_dim, 1u);
    const std::size_t n = t.tau;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        EXPECT_EQ(t.mult_table[a][b], t.mult_table[b][a]);
        for (std::size_t c = 0; c < n; ++c) {
          // (e_a e_b) e_c = e_a (e_b e_c)
          std::vector<Coefficient> left(n), right(n);
          for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t l = 0; l < n; ++l) {
              left[l] += t.mult_table[a][b][k] * t.mult_table[k][c][l];
              right[l] += t.mult_table[b][c][k] * t.mult_table[a][k][l];
            }
          }
          EXPECT_EQ(left, right);
        }
      }
  }
}

TEST(TyurinaAlgebra, NonQuasiHomogeneousHasSmallerTau) {
  // x^4 + y^5 + x^2 y^3 is semi-quasihomogeneous but not quasi-homogeneous.
  Ring two = ring_of({"x", "y"});
  Germ g = G(two, "x^4 + y^5 + x^2*y^3");
  EXPECT_EQ(milnor_number(g), Dimension(12));
  EXPECT_EQ(tyurina_number(g), Dimension(11));
  EXPECT_EQ(oracle::milnor(oracle::make({{1, {4, 0}}, {1, {0, 5}}, {1, {2, 3}}}), 2, 12), 12u);
  EXPECT_EQ(oracle::tyurina(oracle::make({{1, {4, 0}}, {1, {0, 5}}, {1, {2, 3}}}), 2, 12), 11u);
}

TEST(Corank, Examples) {
  Ring two = ring_of({"z0", "z1"});
  EXPECT_EQ(corank(G(two, "z0^3 + z1^2")), 1u);
  EXPECT_EQ(corank(G(two, "z0^2 + z1^2")), 0u);
  EXPECT_EQ(corank(G(two, "z0^3 + z1^3")), 2u);
}

TEST(DeterminacyBound, Examples) {
  Ring one = ring_of({"z0"});
  Ring two = ring_of({"z0", "z1"});
  EXPECT_EQ(determinacy_bound(G(one, "z0^3")), std::optional<std::uint32_t>(3));
  EXPECT_EQ(determinacy_bound(G(one, "z0^2")), std::optional<std::uint32_t>(2));
  EXPECT_EQ(determinacy_bound(G(two, "z0^3 + z1^3")), std::optional<std::uint32_t>(3));
}

TEST(SplitSquares, AlreadySplit) {
  Ring two = ring_of({"z0", "z1"});
  auto s = split_squares(G(two, "z1^2 + z0^3"), 4);
  ASSERT_TRUE(s.residual);
  EXPECT_EQ(s.residual_vars, (std::vector<std::size_t>{0}));
  EXPECT_EQ(s.residual->f(), P(s.residual->ring(), "z0^3"));
  EXPECT_EQ(s.transform, (std::vector<Poly>{P(two, "z0"), P(two, "z1")}));
}

TEST(SplitSquares, CompletesTheSquare) {
  Ring two = ring_of({"z0", "z1"});
  Germ g = G(two, "z0^2 + 2*z0*z1 + z1^2 + z1^3");
  auto s = split_squares(g, 4);
  ASSERT_TRUE(s.residual);
  ASSERT_EQ(s.residual_vars.size(), 1u);
  Ring rr = s.residual->ring();
  // residual is a cube in the remaining variable
  EXPECT_EQ(s.residual->f().order(), 3u);
  EXPECT_EQ(s.residual->f().truncated(3), Poly::variable(rr, 0) * Poly::variable(rr, 0) * Poly::variable(rr, 0));
  Poly diff = substitute(g.f(), s.transform, 4) - s.normal_form(two);
  EXPECT_GT(diff.truncated(4).order(), 4u);
}

TEST(SplitSquares, Corank0) {
  Ring two = ring_of({"z0", "z1"});
  auto s = split_squares(G(two, "z0*z1"), 3);
  EXPECT_FALSE(s.residual);
  EXPECT_EQ(s.squares.size(), 2u);
}

TEST(SplitSquaresProperties, TransformReplays) {
  Random rnd(41);
  Ring r = ring_of({"x", "y", "z"});
  for (int trial = 0; trial < 25; ++trial) {
    Poly f = rnd.poly(r, 2, 2, 3, true) + rnd.poly(r, 3, 4, 3, true);
    if (f.is_zero() || f.order() < 2) continue;
    Germ g(f);
    auto s = split_squares(g, 5);
    Poly diff = substitute(f, s.transform, 5) - s.normal_form(r);
    EXPECT_GT(diff.truncated(5).order(), 5u) << to_string(f);
    if (s.residual) EXPECT_EQ(rank(hessian_at_zero(s.residual->f())), 0u);
  }
}

TEST(AdeRecognize, Examples) {
  Ring two = ring_of({"z0", "z1"});
  EXPECT_EQ(ade_recognize(G(two, "z0^3 + z1^2"))->to_string(), "A2");
  EXPECT_EQ(ade_recognize(G(two, "z0^2*z1 + z1^3"))->to_string(), "D4");
  EXPECT_EQ(ade_recognize(G(two, "z0^3 + z1^4"))->to_string(), "E6");
}

TEST(AdeRecognize, WholeSuiteAndStabilization) {
  Ring two = ade_ring();
  for (const auto& c : ade_suite()) {
    Germ g = G(two, c.text.c_str());
    auto t = ade_recognize(g);
    ASSERT_TRUE(t) << c.name;
    EXPECT_EQ(t->to_string(), c.name);
    EXPECT_EQ(ade_recognize(stabilize(g, 2))->to_string(), c.name);
  }
}

TEST(AdeRecognize, NonSimpleGivesNone) {
  Ring two = ring_of({"x", "y"});
  EXPECT_FALSE(ade_recognize(G(two, "x^4 + y^4")));   // X9, corank 2, zero cubic
  EXPECT_FALSE(ade_recognize(G(two, "x^3 + y^7")));   // E12
  Ring three = ring_of({"x", "y", "z"});
  EXPECT_FALSE(ade_recognize(G(three, "x^3 + y^3 + z^3")));  // corank 3
}

TEST(AdeRecognize, InvariantUnderCoordinateChanges) {
  Random rnd(42);
  Ring two = ade_ring();
  auto suite = ade_suite();
  for (int trial = 0; trial < 24; ++trial) {
    const auto& c = suite[static_cast<std::size_t>(trial) % suite.size()];
    auto phi = random_coordinate_change(rnd, two);
    Germ moved(substitute(P(two, c.text.c_str()), phi));
    auto t = ade_recognize(moved);
    ASSERT_TRUE(t) << c.name << " moved to " << to_string(moved.f());
    EXPECT_EQ(t->to_string(), c.name) << to_string(moved.f());
  }
}

TEST(Invariants, MuAtLeastTauAndQuasiHomogeneousEquality) {
  Ring two = ring_of({"x", "y"});
  for (int a = 2; a <= 6; ++a)
    for (int b = 2; b <= 6; ++b) {
      std::string f = "x^" + std::to_string(a) + " + y^" + std::to_string(b);
      Germ g = G(two, f.c_str());
      auto inv = invariants(g);
      ASSERT_TRUE(inv.mu && inv.tau);
      EXPECT_EQ(*inv.mu, static_cast<std::size_t>((a - 1) * (b - 1)));
      EXPECT_EQ(*inv.mu, *inv.tau);
    }
  for (const char* f : {"x^4 + y^5 + x^2*y^3", "x^5 + y^6 + x^3*y^3", "x^3*y + y^5 + x^4"}) {
    auto inv = invariants(G(two, f));
    EXPECT_GE(*inv.mu, *inv.tau) << f;
  }
}

TEST(TyurinaCompare, Examples) {
  Ring one = ring_of({"z0"});
  auto t3 = tyurina_algebra(G(one, "z0^3"));
  auto t4 = tyurina_algebra(G(one, "z0^4"));
  auto cert = tyurina_compare(t3, t4);
  ASSERT_TRUE(cert);
  EXPECT_EQ(cert->invariant, "tau");
  EXPECT_EQ(cert->first, (std::vector<std::size_t>{2}));
  EXPECT_EQ(cert->second, (std::vector<std::size_t>{3}));

  auto stab = tyurina_algebra(stabilize(G(one, "z0^3"), 2));
  EXPECT_FALSE(tyurina_compare(t3, stab));
  EXPECT_FALSE(tyurina_compare(t3, t3));
}

TEST(TyurinaCompare, SeparatesSameTau) {
  // A5 and D5 share tau = 5 but not the Hilbert function.
  Ring two = ade_ring();
  auto a5 = tyurina_algebra(G(two, "z0^6 + z1^2"));
  auto d5 = tyurina_algebra(G(two, "z0^2*z1 + z1^4"));
  auto cert = tyurina_compare(a5, d5);
  ASSERT_TRUE(cert);
  EXPECT_NE(cert->invariant, "tau");
}

TEST(TyurinaProperties, StableUnderAddingSquares) {
  Ring two = ring_of({"x", "y"});
  for (const char* f : {"x^4 + y^5 + x^2*y^3", "x^3 + y^7", "x^4 + y^4", "x^3*y + y^5"}) {
    Germ g = G(two, f);
    auto t = tyurina_algebra(g);
    auto s = tyurina_algebra(stabilize(g, 2));
    for (const auto& name : tyurina_invariant_names())
      EXPECT_EQ(tyurina_invariant(t, name), tyurina_invariant(s, name)) << f << " " << name;
  }
}
