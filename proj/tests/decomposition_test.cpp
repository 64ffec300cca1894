#include <gtest/gtest.h>

#include <cmath>

#include <surplus/decomposition.hpp>
#include <surplus/error.hpp>

#include "generators.hpp"

using namespace surplus;

namespace {

const ScenarioSpace kU3 = ScenarioSpace::uniform(3);

bool has_flag(const Decomposition& d, const std::string& prefix) {
  for (const auto& f : d.flags())
    if (f.rfind(prefix, 0) == 0) return true;
  return false;
}

}  // namespace

TEST(Decompose, BoxExample) {
  const auto a = box_set(kU3, {0, 1, INFINITY});
  const auto d = decompose(a);
  EXPECT_EQ(d.e1(), EventMask::of(3, {0}));
  EXPECT_EQ(d.e2(), EventMask::of(3, {1}));
  EXPECT_EQ(d.e3(), EventMask::of(3, {2}));
  EXPECT_NEAR(d.loss_capacity()[1], 1.0, 1e-8);
  EXPECT_TRUE(d.in_D(Position{0, 1, 0}));
  EXPECT_FALSE(d.in_D(Position{0, 1.01, 0}));
  const auto j = nlohmann::json(d);
  EXPECT_EQ(j["E1"], nlohmann::json::array({"w1"}));
  EXPECT_EQ(j["E2"], nlohmann::json::array({"w2"}));
  EXPECT_EQ(j["E3"], nlohmann::json::array({"w3"}));
  EXPECT_EQ(j["probe_bound"], 1e9);
}

TEST(Decompose, SpanHasNoMiddleBand) {
  const auto d = decompose(span_set(kU3, EventMask::of(3, {0, 1})));
  EXPECT_EQ(d.e1(), EventMask::of(3, {0, 1}));
  EXPECT_TRUE(d.e2().empty());
  EXPECT_EQ(d.e3(), EventMask::of(3, {2}));
}

TEST(Decompose, PositiveConeIsAllFirstBand) {
  const auto d = decompose(positive_cone(kU3));
  EXPECT_EQ(d.e1(), EventMask::all(3));
  EXPECT_TRUE(d.e2().empty());
  EXPECT_TRUE(d.e3().empty());
}

TEST(Decompose, RequiresClaims) {
  EXPECT_THROW(decompose(es_set(kU3, 0.5, 0)), ClaimError);
  EXPECT_THROW(decompose(halfspace_set(kU3, 0)), ClaimError);
}

TEST(Decompose, CensoredProbeIsFlagged) {
  const auto d = decompose(box_set(kU3, {0, 7e8, INFINITY}), 1e9);
  EXPECT_TRUE(has_flag(d, "probe-censored"));
  // The analytic capacity certifies the infinite one, so it is not flagged.
  EXPECT_FALSE(has_flag(d, "unbounded within probe: w3"));
}

TEST(Decompose, CustomSetsAreFlaggedUnverified) {
  const auto a = custom_set(kU3, "loss cap", [](const Position& x) { return x[0] >= -2 && x[1] >= 0; },
                            SetClaims{.convex = true, .monotone = true, .surplus_invariant = true});
  const auto d = decompose(a);
  EXPECT_TRUE(has_flag(d, "order-closedness-unverified"));
  EXPECT_TRUE(has_flag(d, "unbounded within probe: w3"));
  EXPECT_EQ(d.e2(), EventMask::of(3, {0}));
}

TEST(Decompose, ReconstructionExamples) {
  const auto a = box_set(kU3, {0, 1, INFINITY});
  EXPECT_TRUE(a.contains(Position{1, -0.5, -100}));
  EXPECT_FALSE(a.contains(Position{-0.1, 0, 0}));
  const auto r = verify_reconstruction(a, decompose(a), Sampler(kU3, 1), 5000);
  EXPECT_TRUE(r.passed()) << nlohmann::json(r).dump();
}

TEST(Decompose, MiddleBandIndependentOfProbeBound) {
  gen::Gen g(81);
  for (int t = 0; t < 20; ++t) {
    const auto s = g.space(static_cast<std::size_t>(g.integer(2, 4)));
    std::vector<double> bounds;
    for (std::size_t i = 0; i < s.size(); ++i) bounds.push_back(g.pick(std::vector<double>{0.0, g.real(0.1, 5), INFINITY}));
    const auto a = intersect({box_set(s, bounds), shortfall_set(s, LossFunction::power(1), g.real(0.5, 3), 0)});
    EXPECT_EQ(decompose(a, 1e6).e2(), decompose(a, 1e9).e2());
  }
}

TEST(Decompose, LossSideChecks) {
  const auto a = box_set(kU3, {0, 1, INFINITY});
  const auto d = decompose(a);
  EXPECT_TRUE(check_radially_bounded_D(d, Sampler(kU3, 2), 500).passed());
  EXPECT_TRUE(check_support_condition(d, Sampler(kU3, 2), 100).passed());
  const auto r = recession_lineality(a, d, Sampler(kU3, 2), 300);
  EXPECT_TRUE(r.passed()) << nlohmann::json(r).dump();
  const auto span = decompose(span_set(kU3, EventMask::of(3, {0})));
  EXPECT_TRUE(check_radially_bounded_D(span, Sampler(kU3, 2), 100).passed());
  EXPECT_TRUE(check_support_condition(span, Sampler(kU3, 2), 100).passed());
}

TEST(Decompose, RobustSpaceSupportCondition) {
  const ScenarioSpace s({"a", "b", "c"}, {{"P", {0.5, 0.5, 0}}, {"Q", {0, 0.5, 0.5}}});
  const auto a = shortfall_set(s, LossFunction::power(2), 1.0, 0);
  const auto d = decompose(intersect({a, box_set(s, {2, 2, 2})}));
  EXPECT_FALSE(d.e2().empty());
  EXPECT_TRUE(check_support_condition(d, Sampler(s, 3), 100).passed());
}

TEST(Decompose, EventsPartitionSupport) {
  const ScenarioSpace s({"a", "b", "c", "d"}, {{"P", {0.5, 0, 0.25, 0.25}}});
  const auto d = decompose(box_set(s, {1, 1, 0, INFINITY}));
  EXPECT_EQ(d.e1() | d.e2() | d.e3(), s.support());
  EXPECT_TRUE((d.e1() & d.e2()).empty());
  EXPECT_TRUE((d.e2() & d.e3()).empty());
  EXPECT_FALSE(d.e2().contains(1));
}

TEST(Decompose, ReconstructionOnRandomHybrids) {
  gen::Gen g(82);
  for (int t = 0; t < 10; ++t) {
    const auto s = g.space(static_cast<std::size_t>(g.integer(2, 4)));
    std::vector<double> bounds;
    for (std::size_t i = 0; i < s.size(); ++i) bounds.push_back(g.pick(std::vector<double>{0.0, g.real(0.1, 5), INFINITY}));
    const auto ev = EventMask::from_bits(s.size(), static_cast<unsigned long long>(g.integer(0, (1 << s.size()) - 1)));
    const auto a = intersect({box_set(s, bounds), span_set(s, ev),
                              shortfall_set(s, LossFunction::power(g.real(1, 2)), g.real(0.5, 3), 0)});
    const auto r = verify_reconstruction(a, decompose(a), Sampler(s, static_cast<std::uint64_t>(t)), 2000);
    EXPECT_TRUE(r.passed()) << nlohmann::json(r).dump();
  }
}
