#include <gtest/gtest.h>

#include <surplus/acceptance.hpp>
#include <surplus/error.hpp>
#include <surplus/measures.hpp>

#include "generators.hpp"
#include "oracles.hpp"

using namespace surplus;

namespace {

const ScenarioSpace kU2 = ScenarioSpace::uniform(2);

std::vector<double> grid_points() {
  std::vector<double> g;
  for (int k = -10; k <= 10; ++k) g.push_back(0.5 * k);
  return g;
}

}  // namespace

TEST(Membership, Examples) {
  const auto cone = positive_cone(kU2);
  EXPECT_TRUE(cone.contains(Position{1, 2}));
  EXPECT_FALSE(cone.contains(Position{-1, 2}));
  EXPECT_TRUE(es_set(kU2, 0.75, 0).contains(Position{-1, 10}));
}

TEST(Membership, DependsOnlyOnQuasiSureClass) {
  const ScenarioSpace s({"a", "b", "c"}, {{"P", {0.5, 0.5, 0.0}}});
  const auto a = var_set(s, 0.4, 0);
  EXPECT_EQ(a.contains(Position{1, 1, -100}), a.contains(Position{1, 1, 100}));
}

TEST(LossSide, Examples) {
  const auto box = box_set(kU2, {1, 1});
  EXPECT_TRUE(box.in_D(Position{1, 1}));
  EXPECT_FALSE(box.in_D(Position{2, 0}));
  EXPECT_FALSE(var_set(kU2, 0.4, 0).in_D(Position{2, 0}));
  EXPECT_THROW(box.in_D(Position{-1, 0}), InputError);
}

TEST(SurplusInvarianceCheck, VarSetsPass) {
  for (double a : {0.05, 0.25, 0.5, 0.9}) {
    const auto r = check_surplus_invariant(var_set(kU2, a, 0), Sampler(kU2, 1), 1000);
    EXPECT_TRUE(r.passed()) << nlohmann::json(r).dump();
  }
}

TEST(SurplusInvarianceCheck, EsSetFailsWithReplayableWitness) {
  const auto a = es_set(kU2, 0.75, 0);
  const auto r = check_surplus_invariant(a, Sampler(kU2, 1), 1000);
  ASSERT_FALSE(r.passed());
  const Position x(r.witness["X"].get<std::vector<double>>());
  const Position y(r.witness["Y"].get<std::vector<double>>());
  EXPECT_TRUE(a.contains(x));
  EXPECT_FALSE(a.contains(y));
  EXPECT_EQ(neg_part(x), neg_part(y));
  // The hand-derived pair.
  EXPECT_TRUE(a.contains(Position{-1, 10}));
  EXPECT_FALSE(a.contains(Position{-1, 1.5}));
  EXPECT_NEAR(oracle::es({-1, 1.5}, {0.5, 0.5}, 0.75), 0.125 / 0.75, 1e-12);
}

TEST(SurplusInvarianceCheck, WholeSpacePasses) {
  EXPECT_TRUE(check_surplus_invariant(whole_space(kU2), Sampler(kU2, 1), 200).passed());
}

TEST(Equivalences, SpanOnWholeSpacePasses) {
  EXPECT_TRUE(check_equivalences(span_set(kU2, EventMask::all(2)), Sampler(kU2, 2), 1000).passed());
  EXPECT_TRUE(check_equivalences(whole_space(kU2), Sampler(kU2, 2), 200).passed());
}

TEST(Equivalences, EsSetViolatesNegativePartLaw) {
  const auto r = check_equivalences(es_set(kU2, 0.75, 0), Sampler(kU2, 2), 1000);
  EXPECT_FALSE(r.passed());
}

TEST(Equivalences, RequireMonotoneClaim) {
  const auto a = custom_set(kU2, "x", [](const Position&) { return true; }, SetClaims{});
  EXPECT_THROW(check_equivalences(a, Sampler(kU2, 1), 10), ClaimError);
}

TEST(Equivalences, GridEnumerationOnBuiltIns) {
  const auto grid = grid_points();
  gen::Gen g(41);
  const auto s = g.space(3);
  const std::vector<AcceptanceSet> sets{var_set(s, 0.25, 0), span_set(s, EventMask::of(3, {0, 2})),
                                        shortfall_set(s, LossFunction::power(2), 1.0, 0), box_set(s, {0, 1, INFINITY}),
                                        positive_cone(s)};
  for (const auto& a : sets) {
    const auto r = check_equivalences_grid(a, grid);
    EXPECT_TRUE(r.passed()) << a.description() << ' ' << nlohmann::json(r).dump();
  }
}

TEST(BandStability, Verdicts) {
  EXPECT_TRUE(check_band_stability(var_set(kU2, 0.4, 0), Sampler(kU2, 3), 500).passed());
  EXPECT_TRUE(check_band_stability(whole_space(kU2), Sampler(kU2, 3), 100).passed());
  const auto r = check_band_stability(halfspace_set(kU2, 0), Sampler(kU2, 3), 500);
  EXPECT_FALSE(r.passed());
  // The hand example: E[X] = 0.5 but E[1_{w1} X] = -0.5.
  EXPECT_TRUE(halfspace_set(kU2, 0).contains(Position{-1, 2}));
  EXPECT_FALSE(halfspace_set(kU2, 0).contains(Position{-1, 0}));
}

TEST(BandStability, AgreesWithSurplusInvarianceOnBuiltIns) {
  gen::Gen g(42);
  for (int t = 0; t < 8; ++t) {
    const auto s = g.space(3);
    const std::vector<AcceptanceSet> sets{var_set(s, g.real(0.05, 0.9), 0), es_set(s, g.real(0.3, 0.9), 0),
                                          halfspace_set(s, 0), shortfall_set(s, LossFunction::power(1), 0.5, 0),
                                          span_set(s, EventMask::of(3, {1}))};
    for (const auto& a : sets) {
      const Sampler sm(s, static_cast<std::uint64_t>(t));
      EXPECT_EQ(check_band_stability(a, sm, 2000).passed(), check_surplus_invariant(a, sm, 2000).passed())
          << a.description();
    }
  }
}

TEST(ConvexityViaLossSide, Verdicts) {
  const auto sf = shortfall_set(kU2, LossFunction::power(2), 1.0, 0);
  const auto r = check_convexity_via_D(sf, Sampler(kU2, 4), 1000);
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(r.witness.value("A_convex_on_sample", false));
  // Two loss boxes {X^- <= (4, 0)} and {X^- <= (0, 4)}: the union is not convex.
  const auto u = unite({box_set(kU2, {4, 0}), box_set(kU2, {0, 4})});
  const auto ru = check_convexity_via_D(u, Sampler(kU2, 4), 2000);
  EXPECT_TRUE(ru.passed());
  EXPECT_FALSE(ru.witness.value("A_convex_on_sample", true));
  EXPECT_FALSE(ru.witness.value("D_convex_on_sample", true));
  EXPECT_TRUE(check_convexity_via_D(positive_cone(kU2), Sampler(kU2, 4), 200).passed());
}

TEST(SetAlgebra, IntersectionAndUnionClaims) {
  const auto a = intersect({var_set(kU2, 0.4, 0), box_set(kU2, {1, 1})});
  EXPECT_TRUE(a.claims().surplus_invariant);
  EXPECT_TRUE(a.contains(Position{0, 0}));
  EXPECT_FALSE(a.contains(Position{-2, 5}));
  EXPECT_FALSE(unite({box_set(kU2, {1, 0}), box_set(kU2, {0, 1})}).claims().convex);
}

TEST(LossSide, SolidOnGrid) {
  const auto grid = grid_points();
  gen::Gen g(43);
  const auto s = g.space(3);
  const auto a = shortfall_set(s, LossFunction::power(1.5), 1.0, 0);
  for (double w0 : grid)
    for (double w1 : grid)
      for (double w2 : grid) {
        if (w0 < 0 || w1 < 0 || w2 < 0) continue;
        const Position w{w0, w1, w2};
        if (!a.in_D(w)) continue;
        EXPECT_TRUE(a.in_D(Position{w0 / 2, w1, 0}));
        EXPECT_TRUE(a.in_D(Position{0, w1 / 3, w2}));
      }
}
