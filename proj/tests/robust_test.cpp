#include <gtest/gtest.h>

#include <cmath>

#include <surplus/error.hpp>
#include <surplus/robust.hpp>

#include "generators.hpp"

using namespace surplus;

namespace {

ScenarioSpace two_priors() { return ScenarioSpace({"w1", "w2"}, {{"D", {1.0, 0.0}}, {"U", {0.5, 0.5}}}); }

}  // namespace

TEST(Capacity, MaxOverPriors) {
  const auto s = two_priors();
  EXPECT_DOUBLE_EQ(capacity(s, EventMask::of(2, {1})), 0.5);
  EXPECT_EQ(capacity(s, EventMask::none(2)), 0.0);
  EXPECT_EQ(capacity(s, EventMask::all(2)), 1.0);
}

TEST(Capacity, MonotoneUnderInclusion) {
  gen::Gen g(21);
  for (int t = 0; t < 200; ++t) {
    const auto s = g.space(4, static_cast<std::size_t>(g.integer(1, 3)), true);
    const auto f = EventMask::from_bits(4, static_cast<unsigned long long>(g.integer(0, 15)));
    const auto e = f & EventMask::from_bits(4, static_cast<unsigned long long>(g.integer(0, 15)));
    EXPECT_LE(capacity(s, e), capacity(s, f));
  }
}

TEST(CNull, ZeroUnderEveryPrior) {
  const ScenarioSpace dirac({"w1", "w2"}, {{"D", {1.0, 0.0}}});
  EXPECT_TRUE(is_c_null(dirac, EventMask::of(2, {1})));
  EXPECT_TRUE(is_c_null(dirac, EventMask::none(2)));
  EXPECT_FALSE(is_c_null(ScenarioSpace::uniform(3), EventMask::of(3, {2})));
}

TEST(RobustNorm, Examples) {
  const ScenarioSpace diracs({"w1", "w2"}, {{"A", {1.0, 0.0}}, {"B", {0.0, 1.0}}});
  EXPECT_DOUBLE_EQ(robust_norm(diracs, Position{2, 4}, 1.0), 4.0);
  EXPECT_EQ(robust_norm(diracs, Position{0, 0}, 2.0), 0.0);
  EXPECT_NEAR(robust_norm(ScenarioSpace::uniform(2), Position{2, 4}, 2.0), std::sqrt(10.0), 1e-12);
  EXPECT_EQ(robust_norm(diracs, Position{2, -5}, INFINITY), 5.0);
  EXPECT_THROW(robust_norm(diracs, Position{1, 1}, 0.5), InputError);
}

TEST(RobustNorm, TriangleAndHomogeneity) {
  gen::Gen g(22);
  for (int t = 0; t < 300; ++t) {
    const auto s = g.space(3, 2, true);
    const auto x = g.position(s), y = g.position(s);
    const double p = g.pick(std::vector<double>{1.0, 1.5, 2.0, 3.0, INFINITY});
    const double c = g.real(-3, 3);
    SCOPED_TRACE(t);
    EXPECT_LE(robust_norm(s, x + y, p), robust_norm(s, x, p) + robust_norm(s, y, p) + 1e-9);
    EXPECT_NEAR(robust_norm(s, c * x, p), std::abs(c) * robust_norm(s, x, p), 1e-9);
  }
}

TEST(Pairing, Examples) {
  const auto s = ScenarioSpace::uniform(2);
  EXPECT_DOUBLE_EQ(pair(s, Position{2, 4}, DualMeasure({{0, {1, 1}, 1.0}})), 3.0);
  EXPECT_EQ(pair(s, Position{2, 4}, DualMeasure({{0, {1, 1}, 0.0}})), 0.0);
  EXPECT_DOUBLE_EQ(pair(s, Position{2, 4}, DualMeasure({{0, {1, 0}, 1.0}})), 1.0);
}

TEST(Pairing, BilinearAndPositive) {
  gen::Gen g(23);
  for (int t = 0; t < 300; ++t) {
    const auto s = g.space(3, 2, true);
    auto measure = [&](bool positive) {
      DualMeasure mu;
      for (int k = 0; k < 2; ++k) {
        std::vector<double> z(3);
        for (auto& v : z) v = positive ? g.real(0, 2) : g.real(-2, 2);
        mu.add({static_cast<std::size_t>(k), z, positive ? g.real(0, 1) : g.real(-1, 1)});
      }
      return mu;
    };
    const auto x = g.position(s), y = g.position(s);
    const auto mu = measure(false), nu = measure(false);
    const double a = g.real(-2, 2);
    SCOPED_TRACE(t);
    EXPECT_NEAR(pair(s, a * x + y, mu), a * pair(s, x, mu) + pair(s, y, mu), 1e-9);
    EXPECT_NEAR(pair(s, x, mu * a + nu), a * pair(s, x, mu) + pair(s, x, nu), 1e-9);
    const auto pos = measure(true);
    EXPECT_TRUE(is_positive(pos));
    const auto hi = max(x, y);
    EXPECT_LE(pair(s, x, pos), pair(s, hi, pos) + 1e-12);
  }
}

TEST(Pairing, DependsOnlyOnQuasiSureClass) {
  const ScenarioSpace s({"a", "b", "c"}, {{"P", {0.5, 0.5, 0.0}}});
  const DualMeasure mu({{0, {1, 2, 3}, 1.0}});
  EXPECT_EQ(pair(s, Position{1, 1, 100}, mu), pair(s, Position{1, 1, -7}, mu));
}

TEST(CanonicalDensity, EqualActionGivesEqualDensity) {
  const auto s = two_priors();
  // Same action on positions, different term lists.
  const DualMeasure a({{0, {2, 0}, 1.0}, {1, {0, 2}, 1.0}});
  const DualMeasure b({{1, {2, 2}, 1.0}, {0, {1, 0}, 1.0}});
  EXPECT_EQ(canonical_density(s, a), (std::vector<double>{2, 1}));
  EXPECT_EQ(canonical_density(s, b), (std::vector<double>{2, 1}));
  const auto back = from_point_masses(s, {2, 1});
  gen::Gen g(24);
  for (int t = 0; t < 50; ++t) {
    const auto x = g.position(s);
    EXPECT_NEAR(pair(s, x, back), pair(s, x, a), 1e-12);
  }
}

TEST(CanonicalDensity, StandingDualityAssumptionIsRecorded) {
  EXPECT_TRUE(bounded_dual_identification_holds(ScenarioSpace::uniform(2)));
}
