#include <gtest/gtest.h>

#include <surplus/error.hpp>
#include <surplus/scenario.hpp>

#include "generators.hpp"

using namespace surplus;

TEST(LatticeParts, NegativePartOfMixedPosition) {
  EXPECT_EQ(neg_part(Position{-1, 2}), (Position{1, 0}));
  EXPECT_EQ(neg_part(Position{3, 0}), (Position{0, 0}));
  EXPECT_EQ(pos_part(Position{-3, -1}), (Position{0, 0}));
}

TEST(LatticeParts, PartsRecombineAndAreDisjoint) {
  gen::Gen g(11);
  for (int t = 0; t < 500; ++t) {
    const Position x(g.payoffs(static_cast<std::size_t>(g.integer(1, 6))));
    const auto p = pos_part(x), n = neg_part(x);
    SCOPED_TRACE(t);
    EXPECT_EQ(p - n, x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      EXPECT_GE(p[i], 0.0);
      EXPECT_GE(n[i], 0.0);
      EXPECT_EQ(std::min(p[i], n[i]), 0.0);
    }
  }
}

TEST(BandProjection, KeepsEventAndZeroesRest) {
  EXPECT_EQ(band_project(Position{5, -2}, EventMask::of(2, {0})), (Position{5, 0}));
  EXPECT_EQ(band_project(Position{1, 2, 3}, EventMask::of(3, {1, 2})), (Position{0, 2, 3}));
  const Position x{4, -7, 0.5};
  EXPECT_EQ(band_project(x, EventMask::all(3)), x);
}

TEST(BandProjection, IdempotentAndComplementary) {
  gen::Gen g(12);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 6));
    const Position x(g.payoffs(n));
    const auto e = EventMask::from_bits(n, static_cast<unsigned long long>(g.integer(0, (1 << n) - 1)));
    SCOPED_TRACE(t);
    EXPECT_EQ(band_project(band_project(x, e), e), band_project(x, e));
    EXPECT_EQ(band_project(x, e) + band_project(x, e.complement()), x);
  }
}

TEST(QuasiSureOrder, IgnoresEntriesOffSupport) {
  const auto full = EventMask::all(2);
  EXPECT_TRUE(order_leq(Position{0, 0}, Position{1, 2}, full));
  EXPECT_FALSE(order_leq(Position{0, 5}, Position{1, 2}, full));
  EXPECT_TRUE(order_leq(Position{0, 5}, Position{1, 2}, EventMask::of(2, {0})));
}

TEST(QuasiSureOrder, PartialOrderOnClasses) {
  gen::Gen g(13);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 3;
    const auto s = EventMask::from_bits(n, static_cast<unsigned long long>(g.integer(1, 7)));
    // Coarse grid so that comparable pairs are common.
    auto draw = [&] {
      std::vector<double> v(n);
      for (auto& x : v) x = g.integer(-1, 1);
      return Position(v);
    };
    const auto x = draw(), y = draw(), z = draw();
    SCOPED_TRACE(t);
    EXPECT_TRUE(order_leq(x, x, s));
    if (order_leq(x, y, s) && order_leq(y, z, s)) EXPECT_TRUE(order_leq(x, z, s));
    if (order_leq(x, y, s) && order_leq(y, x, s))
      for (auto i : s.indices()) EXPECT_EQ(x[i], y[i]);
  }
}

TEST(ScenarioSpace, RejectsMalformedPriors) {
  EXPECT_THROW(ScenarioSpace({"a", "b"}, {{"P", {0.5, 0.6}}}), InputError);
  EXPECT_THROW(ScenarioSpace({"a", "b"}, {{"P", {1.5, -0.5}}}), InputError);
  EXPECT_THROW(ScenarioSpace({"a", "b"}, {{"P", {1.0}}}), InputError);
  EXPECT_THROW(ScenarioSpace({"a", "b"}, {}), InputError);
}

TEST(ScenarioSpace, CanonicalRepresentativeZeroesOffSupport) {
  const ScenarioSpace s({"a", "b", "c"}, {{"P", {0.5, 0.0, 0.5}}});
  EXPECT_EQ(s.position({1, 9, -2}), (Position{1, 0, -2}));
  EXPECT_EQ(s.support(), EventMask::of(3, {0, 2}));
  EXPECT_THROW(s.position({1, 2}), InputError);
  EXPECT_THROW(s.position({1, std::numeric_limits<double>::quiet_NaN(), 0}), InputError);
}
