#include <gtest/gtest.h>

#include "support.hpp"

using namespace mfsing;
using namespace testing_support;

namespace {

const Equivalent& as_equivalent(const EquivalenceVerdict& v) { return std::get<Equivalent>(v.outcome); }

bool parity_obstructed(const EquivalenceVerdict& v) {
  return v.not_equivalent() && std::holds_alternative<ParityObstruction>(std::get<NotEquivalent>(v.outcome).certificate);
}

}  // namespace

TEST(KrullDimension, Examples) {
  EXPECT_EQ(krull_dimension(G(ring_of({"z0"}), "z0^3")), 0u);
  EXPECT_EQ(krull_dimension(G(ring_of({"z0", "z1", "z2"}), "z0^2 + z1^2 + z2^2")), 2u);
  EXPECT_EQ(krull_dimension(G(ring_of({"z0", "z1", "z2"}), "z0^3 + z1^2 + z2^2")), 2u);
}

TEST(Stabilize, Examples) {
  Germ g = G(ring_of({"z0"}), "z0^3");
  Germ s = stabilize(g, 2);
  EXPECT_EQ(s.var_count(), 3u);
  EXPECT_EQ(s.ring()->var_names(), (std::vector<std::string>{"z0", "w1", "w2"}));
  EXPECT_EQ(s.f(), P(s.ring(), "z0^3 + w1^2 + w2^2"));
  EXPECT_EQ(stabilize(g, 0).f(), g.f());
}

TEST(Stabilize, SkipsTakenNames) {
  Germ g = G(ring_of({"w1", "x"}), "w1^3 + x^2");
  Germ s = stabilize(g, 2);
  EXPECT_EQ(s.ring()->var_names(), (std::vector<std::string>{"w1", "x", "w2", "w3"}));
}

TEST(Stabilize, TyurinaNumberIsUnchanged) {
  for (const auto& c : ade_suite()) {
    Germ g = G(ade_ring(), c.text.c_str());
    EXPECT_EQ(tyurina_algebra(stabilize(g, 2)).tau, tyurina_algebra(g).tau) << c.name;
  }
}

TEST(ParityCheck, Examples) {
  EXPECT_FALSE(parity_check(0, 2));
  auto p = parity_check(0, 1);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->d, 0u);
  EXPECT_EQ(p->e, 1u);
  EXPECT_FALSE(parity_check(3, 3));
  EXPECT_TRUE(parity_check(5, 2));
}

TEST(Decide, StabilizedCusp) {
  auto v = decide_dg_equivalence(G(ring_of({"z0"}), "z0^3"), G(ring_of({"z0", "w1", "w2"}), "z0^3 + w1^2 + w2^2"));
  ASSERT_TRUE(v.equivalent());
  EXPECT_EQ(as_equivalent(v).m, 2u);
  EXPECT_EQ(as_equivalent(v).stabilized_side, Side::First);
  EXPECT_TRUE(verify_verdict(v).ok);
}

TEST(Decide, OddDifferenceIsObstructed) {
  auto v = decide_dg_equivalence(G(ring_of({"z0"}), "z0^3"), G(ring_of({"z0", "w1"}), "z0^3 + w1^2"));
  ASSERT_TRUE(parity_obstructed(v));
  const auto& po = std::get<ParityObstruction>(std::get<NotEquivalent>(v.outcome).certificate);
  EXPECT_EQ(po.d, 0u);
  EXPECT_EQ(po.e, 1u);
  EXPECT_TRUE(verify_verdict(v).ok);
}

TEST(Decide, TyurinaNumberMismatch) {
  Ring r = ring_of({"z0"});
  auto v = decide_dg_equivalence(G(r, "z0^3"), G(r, "z0^4"));
  ASSERT_TRUE(v.not_equivalent());
  const auto& cert = std::get<TyurinaInvariantMismatch>(std::get<NotEquivalent>(v.outcome).certificate);
  EXPECT_EQ(cert.invariant, "tau");
  EXPECT_EQ(cert.first, (std::vector<std::size_t>{2}));
  EXPECT_EQ(cert.second, (std::vector<std::size_t>{3}));
  EXPECT_TRUE(verify_verdict(v).ok);
}

TEST(Decide, NodeInTwoCoordinateSystems) {
  Ring r = ring_of({"z0", "z1"});
  auto v = decide_dg_equivalence(G(r, "z0^2 + z1^2"), G(r, "z0*z1"));
  ASSERT_TRUE(v.equivalent());
  EXPECT_EQ(as_equivalent(v).m, 0u);
  EXPECT_FALSE(as_equivalent(v).stabilized_side);
  EXPECT_TRUE(verify_verdict(v).ok);
}

TEST(Decide, NonSimpleGermsUseSubstitutionWitness) {
  Ring r = ring_of({"x", "y"});
  Ring s = ring_of({"a", "b", "c", "d"});
  struct Pair {
    Germ g1, g2;
  };
  std::vector<Pair> pairs{{G(r, "x^4 + y^5"), G(r, "x^4 + y^5")},
                          {G(r, "x^4 + y^5"), G(r, "(x + y^2)^4 + y^5")},
                          {G(r, "x^4 + y^5"), G(r, "y^4 - x^5")},
                          {G(r, "x^3 + y^7"), G(s, "a^3 + b^7 + c*d")}};
  for (const auto& p : pairs) {
    auto v = decide_dg_equivalence(p.g1, p.g2);
    ASSERT_TRUE(v.equivalent()) << to_string(p.g2.f());
    EXPECT_TRUE(std::holds_alternative<SubstitutionWitness>(as_equivalent(v).witness));
    EXPECT_TRUE(verify_verdict(v).ok);
  }
}

TEST(Decide, ModulusChangesTyurinaNumber) {
  // x^4 + y^5 + x^2 y^3 lies in the same mu-constant family as x^4 + y^5 but
  // has a smaller Tyurina algebra
  Ring r = ring_of({"x", "y"});
  auto v = decide_dg_equivalence(G(r, "x^4 + y^5"), G(r, "x^4 + y^5 + x^2*y^3"));
  ASSERT_TRUE(v.not_equivalent());
  EXPECT_TRUE(verify_verdict(v).ok);
}

TEST(Decide, RejectsSmoothAndNonIsolatedInputs) {
  Ring r = ring_of({"z0", "z1"});
  for (auto [a, b, side] : std::vector<std::tuple<const char*, const char*, std::string>>{
           {"z0 + z1^2", "z0^2 + z1^2", "first"},
           {"z0^2 + z1^2", "z0^2*z1", "second"},
           {"z0^2", "z0^2 + z1^2", "first"}}) {
    try {
      decide_dg_equivalence(G(r, a), G(r, b));
      FAIL() << a << " / " << b;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Precondition);
      EXPECT_NE(std::string(e.what()).find(side), std::string::npos) << e.what();
    }
  }
}

TEST(DecideProperties, Reflexivity) {
  for (const auto& c : ade_suite()) {
    Germ g = G(ade_ring(), c.text.c_str());
    auto v = decide_dg_equivalence(g, g);
    ASSERT_TRUE(v.equivalent()) << c.name;
    EXPECT_EQ(as_equivalent(v).m, 0u);
    EXPECT_TRUE(verify_verdict(v).ok);
  }
}

TEST(DecideProperties, StabilizationCoherence) {
  for (const auto& c : ade_suite()) {
    Germ g = G(ade_ring(), c.text.c_str());
    for (std::size_t m = 0; m <= 5; ++m) {
      auto v = decide_dg_equivalence(g, stabilize(g, m));
      if (m % 2 == 0) {
        ASSERT_TRUE(v.equivalent()) << c.name << " m=" << m;
        EXPECT_EQ(as_equivalent(v).m, m);
      } else {
        EXPECT_TRUE(parity_obstructed(v)) << c.name << " m=" << m;
      }
      EXPECT_TRUE(verify_verdict(v).ok) << c.name << " m=" << m;
    }
  }
}

TEST(DecideProperties, SymmetryAcrossTheSuite) {
  auto suite = ade_suite();
  for (std::size_t a = 0; a < suite.size(); ++a)
    for (std::size_t b = 0; b < suite.size(); ++b) {
      Germ g1 = G(ade_ring(), suite[a].text.c_str());
      Germ g2 = stabilize(G(ade_ring(), suite[b].text.c_str()), (a + b) % 3);
      auto v = decide_dg_equivalence(g1, g2);
      auto w = decide_dg_equivalence(g2, g1);
      EXPECT_STREQ(v.outcome_name(), w.outcome_name()) << suite[a].name << " " << suite[b].name;
      EXPECT_EQ(v.equivalent(), a == b && (a + b) % 3 % 2 == 0) << suite[a].name << " " << suite[b].name;
      EXPECT_TRUE(verify_verdict(v).ok);
      EXPECT_TRUE(verify_verdict(w).ok);
    }
}

TEST(DecideProperties, GeneralCoordinateChangesAreNeverRefuted) {
  Random rnd(71);
  Ring r = ring_of({"x", "y"});
  for (int trial = 0; trial < 12; ++trial) {
    Germ g = G(r, trial % 2 ? "x^4 + y^5" : "x^3 + y^7");
    Germ h(substitute(g.f(), random_coordinate_change(rnd, r)));
    auto v = decide_dg_equivalence(g, h);
    EXPECT_FALSE(v.not_equivalent());
    EXPECT_TRUE(verify_verdict(v).ok);
  }
}

TEST(DecideProperties, SignedPermutationsWithHigherTermsAreFound) {
  Random rnd(72);
  Ring r = ring_of({"x", "y"});
  const char* germs[] = {"x^4 + y^5", "x^3 + y^7", "x^3 + x*y^5", "x^4 + x^2*y^2 + y^5"};
  for (int trial = 0; trial < 16; ++trial) {
    Germ g = G(r, germs[trial % 4]);
    std::vector<Poly> images;
    for (std::size_t j = 0; j < 2; ++j) {
      Poly p = Poly::variable(r, trial % 3 == 0 ? 1 - j : j);
      if (rnd.chance(0.5)) p = -p;
      images.push_back(p + rnd.poly(r, 2, 3, 2));
    }
    Germ h(substitute(g.f(), images));
    auto v = decide_dg_equivalence(g, stabilize(h, trial % 2 ? 2 : 0));
    ASSERT_TRUE(v.equivalent()) << to_string(h.f());
    EXPECT_TRUE(verify_verdict(v).ok);
  }
}

TEST(Verify, DetectsTampering) {
  Ring r = ring_of({"x", "y"});
  auto v = decide_dg_equivalence(G(r, "x^4 + y^5"), G(r, "(x + y^2)^4 + y^5"));
  ASSERT_TRUE(v.equivalent());
  auto bad = v;
  auto& w = std::get<SubstitutionWitness>(std::get<Equivalent>(bad.outcome).witness);
  w.images[0] += Poly::variable(w.images[0].ring(), 1) * Poly::variable(w.images[0].ring(), 1);
  EXPECT_FALSE(verify_verdict(bad).ok);

  auto swapped = v;
  swapped.second = G(r, "x^4 + y^6");
  EXPECT_FALSE(verify_verdict(swapped).ok);

  Ring z = ring_of({"z0"});
  auto t = decide_dg_equivalence(G(z, "z0^3"), G(z, "z0^4"));
  auto& cert = std::get<TyurinaInvariantMismatch>(std::get<NotEquivalent>(t.outcome).certificate);
  cert.second = {2};
  EXPECT_FALSE(verify_verdict(t).ok);

  auto p = decide_dg_equivalence(G(z, "z0^3"), stabilize(G(z, "z0^3"), 1));
  std::get<ParityObstruction>(std::get<NotEquivalent>(p.outcome).certificate).e = 2;
  EXPECT_FALSE(verify_verdict(p).ok);

  EquivalenceVerdict fake{G(z, "z0^3"), G(z, "z0^4"), Equivalent{0, std::nullopt, AdeWitness{*ADEType::parse("A2")}}};
  EXPECT_FALSE(verify_verdict(fake).ok);
}
