#include <gtest/gtest.h>

#include <cmath>

#include <surplus/acceptance.hpp>
#include <surplus/error.hpp>
#include <surplus/measures.hpp>
#include <surplus/risk.hpp>

#include "generators.hpp"
#include "oracles.hpp"

using namespace surplus;

namespace {

std::vector<double> w(const ScenarioSpace& s, std::size_t k = 0) {
  auto span = s.weights(k);
  return {span.begin(), span.end()};
}

const ScenarioSpace kU2 = ScenarioSpace::uniform(2);

}  // namespace

TEST(ValueAtRisk, StrictInequalityConvention) {
  EXPECT_EQ(var(kU2, Position{-1, 2}, 0.4, 0), 1.0);
  EXPECT_EQ(var(kU2, Position{-1, 2}, 0.6, 0), -2.0);
  EXPECT_EQ(var(kU2, Position{3.5, 3.5}, 0.3, 0), -3.5);
  EXPECT_THROW(var(kU2, Position{0, 0}, 0.0, 0), InputError);
  EXPECT_THROW(var(kU2, Position{0, 0}, 1.0, 0), InputError);
}

TEST(ValueAtRisk, GridScanAgreesAtEveryTieResolution) {
  // At alpha = 0.5 the uniform two-point space sits exactly on an atom.
  const Position x{-1, 2};
  EXPECT_NEAR(var(kU2, x, 0.5, 0), oracle::var_scan(x.vector(), {0.5, 0.5}, 0.5), 1e-6);
}

TEST(ExpectedShortfall, StepIntegrationExamples) {
  EXPECT_EQ(es(kU2, Position{-1, 2}, 0.5, 0), 1.0);
  EXPECT_NEAR(es(kU2, Position{-1, 10}, 0.75, 0), -8.0 / 3.0, 1e-12);
  EXPECT_NEAR(es(kU2, Position{-1, 1.5}, 0.75, 0), 1.0 / 6.0, 1e-12);
  EXPECT_EQ(es(kU2, Position{2, 2}, 0.3, 0), -2.0);
  EXPECT_THROW(es(kU2, Position{0, 0}, 1.5, 0), InputError);
}

TEST(ExpectedShortfall, OracleValuesOfTheHandExamples) {
  EXPECT_NEAR(oracle::es({-1, 10}, {0.5, 0.5}, 0.75), -8.0 / 3.0, 1e-12);
  EXPECT_NEAR(oracle::es_steps({-1, 10}, {0.5, 0.5}, 0.75), -8.0 / 3.0, 1e-12);
  EXPECT_NEAR(oracle::es_steps({-1, 1.5}, {0.5, 0.5}, 0.75), 1.0 / 6.0, 1e-12);
}

TEST(Shortfall, Examples) {
  EXPECT_DOUBLE_EQ(shortfall(kU2, Position{-1, 2}, LossFunction::power(1), 0), 0.5);
  EXPECT_DOUBLE_EQ(shortfall(kU2, Position{-2, -1}, LossFunction::power(2), 0), 2.5);
  EXPECT_EQ(shortfall(kU2, Position{0, 4}, LossFunction::exponential(), 0), 0.0);
}

TEST(Span, Examples) {
  EXPECT_FALSE(span_accept(kU2, Position{-1, 2}, EventMask::of(2, {0}), 0));
  EXPECT_TRUE(span_accept(kU2, Position{-1, 2}, EventMask::of(2, {1}), 0));
  EXPECT_TRUE(span_accept(kU2, Position{0, 2}, EventMask::all(2), 0));
}

TEST(ValueAtRisk, MatchesBruteForceOracles) {
  gen::Gen g(31);
  for (int t = 0; t < 200; ++t) {
    const auto s = g.space(static_cast<std::size_t>(g.integer(2, 5)), 1, true);
    const auto x = g.position(s);
    const double a = g.real(0.01, 0.99);
    SCOPED_TRACE(t);
    EXPECT_NEAR(var(s, x, a, 0), oracle::var(x.vector(), w(s), a), 1e-12);
    EXPECT_NEAR(var(s, x, a, 0), oracle::var_scan(x.vector(), w(s), a), 1e-6);
  }
}

TEST(ExpectedShortfall, MatchesRockafellarUryasevAndStepOracles) {
  gen::Gen g(32);
  for (int t = 0; t < 200; ++t) {
    const auto s = g.space(static_cast<std::size_t>(g.integer(2, 5)), 1, true);
    const auto x = g.position(s);
    const double a = g.real(0.01, 0.99);
    SCOPED_TRACE(t);
    EXPECT_NEAR(es(s, x, a, 0), oracle::es(x.vector(), w(s), a), 1e-9);
    EXPECT_NEAR(es(s, x, a, 0), oracle::es_steps(x.vector(), w(s), a), 1e-9);
  }
}

TEST(ValueAtRisk, SurplusInvariantSubjectToPositivityOnGrid) {
  const std::vector<double> grid{-3, -2, -1, -0.5, 0, 0.5, 1, 2, 3};
  gen::Gen g(33);
  for (int rep = 0; rep < 4; ++rep) {
    const auto s = g.space(3);
    const double a = g.pick(std::vector<double>{0.05, 0.25, 0.5, 0.9});
    for (double x0 : grid)
      for (double x1 : grid)
        for (double x2 : grid) {
          const Position x{x0, x1, x2};
          const double v = var(s, x, a, 0);
          if (v > 0) EXPECT_EQ(v, var(s, -neg_part(x), a, 0));
        }
  }
}

TEST(ExpectedShortfall, CashAdditiveMonotoneConvex) {
  gen::Gen g(34);
  for (int t = 0; t < 300; ++t) {
    const auto s = g.space(3);
    const double a = g.real(0.05, 0.95);
    const auto x = g.position(s), y = g.position(s);
    const double m = g.integer(-5, 5);
    SCOPED_TRACE(t);
    EXPECT_NEAR(es(s, x + Position::constant(3, m), a, 0), es(s, x, a, 0) - m, 1e-12);
    EXPECT_LE(es(s, max(x, y), a, 0), es(s, x, a, 0) + 1e-12);
    EXPECT_LE(es(s, 0.5 * (x + y), a, 0), 0.5 * (es(s, x, a, 0) + es(s, y, a, 0)) + 1e-12);
  }
}

TEST(FromAcceptance, PositiveConeGivesMaxLoss) {
  const auto rho = from_acceptance(positive_cone(kU2), Position{1, 1});
  EXPECT_NEAR(rho(Position{-1, 2}), 1.0, 1e-9);
  gen::Gen g(35);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v{g.real(0, 5), g.real(0, 5)};
    EXPECT_NEAR(rho(Position(v)), -std::min(v[0], v[1]), 1e-9);
  }
}

TEST(FromAcceptance, HalfspaceGivesExpectedLoss) {
  gen::Gen g(36);
  for (int t = 0; t < 100; ++t) {
    const auto s = g.space(3);
    const auto rho = from_acceptance(halfspace_set(s, 0), Position::constant(3, 1.0));
    const auto x = g.position(s);
    EXPECT_NEAR(rho(x), -expectation(s, x, 0), 1e-9);
  }
}

TEST(FromAcceptance, AttainsTheInfimum) {
  gen::Gen g(37);
  for (int t = 0; t < 200; ++t) {
    const auto s = g.space(3);
    const auto a = var_set(s, g.pick(std::vector<double>{0.05, 0.25, 0.5, 0.9}), 0);
    const auto one = Position::constant(3, 1.0);
    const auto rho = from_acceptance(a, one);
    const auto x = g.position(s);
    const double r = rho(x);
    SCOPED_TRACE(t);
    EXPECT_TRUE(a.contains(x + (r + 1e-8) * one));
    EXPECT_FALSE(a.contains(x + (r - 1e-8) * one));
  }
}

TEST(FromAcceptance, VarSetRecoversValueAtRisk) {
  gen::Gen g(38);
  for (int t = 0; t < 200; ++t) {
    const auto s = g.space(static_cast<std::size_t>(g.integer(2, 4)));
    const double a = g.pick(std::vector<double>{0.05, 0.25, 0.5, 0.9});
    const auto rho = from_acceptance(var_set(s, a, 0), Position::constant(s.size(), 1.0));
    const auto x = g.position(s);
    EXPECT_NEAR(rho(x), oracle::var(x.vector(), w(s), a), 1e-8);
  }
}

TEST(FromAcceptance, RejectsBadInputs) {
  EXPECT_THROW(from_acceptance(positive_cone(kU2), Position{1, 0}), InputError);
  EXPECT_THROW(from_acceptance(positive_cone(kU2), Position{1, -1}), InputError);
  const auto loose = custom_set(kU2, "not monotone", [](const Position&) { return true; }, SetClaims{});
  EXPECT_THROW(from_acceptance(loose, Position{1, 1}), ClaimError);
}

TEST(FromAcceptance, InfiniteWhenNothingIsAcceptable) {
  const auto empty = custom_set(kU2, "empty", [](const Position&) { return false; }, SetClaims{.monotone = true});
  EXPECT_EQ(from_acceptance(empty, Position{1, 1})(Position{0, 0}), INFINITY);
}

TEST(CashAdditivityCheck, Verdicts) {
  Sampler sampler(kU2, 5);
  EXPECT_TRUE(check_s_additive(from_acceptance(positive_cone(kU2), Position{1, 1}), sampler, 500).passed());
  const auto sq = shortfall_functional(kU2, LossFunction::power(2), 0, Position{1, 1});
  const auto r = check_s_additive(sq, sampler, 500);
  EXPECT_FALSE(r.passed());
  EXPECT_TRUE(r.witness.contains("X"));
  EXPECT_THROW(check_s_additive(shortfall_functional(kU2, LossFunction::power(2), 0), sampler, 10), ClaimError);
}

TEST(CashAdditivityCheck, SkipsInfiniteValues) {
  const auto rho = custom_functional(
      kU2, "inf off the cone", [](const Position& x) { return x[0] >= 0 && x[1] >= 0 ? -std::min(x[0], x[1]) : INFINITY; },
      FunctionalClaims{.monotone = true}, Position{1, 1});
  EXPECT_TRUE(check_s_additive(rho, Sampler(kU2, 1), 300).passed());
}

TEST(SurplusInvarianceSubjectToPositivity, Verdicts) {
  Sampler sampler(kU2, 9);
  const auto one = Position{1, 1};
  const auto r_var = check_si_subject_pos(from_acceptance(var_set(kU2, 0.25, 0), one), sampler, 2000);
  EXPECT_TRUE(r_var.passed()) << nlohmann::json(r_var).dump();
  const auto r_es = check_si_subject_pos(from_acceptance(es_set(kU2, 0.75, 0), one), sampler, 2000);
  EXPECT_FALSE(r_es.passed());
  EXPECT_TRUE(check_si_subject_pos(max_loss(kU2), sampler, 500).passed());
}

TEST(SurplusInvarianceSubjectToPositivity, HoldsForEverySurplusInvariantSet) {
  gen::Gen g(39);
  for (int t = 0; t < 10; ++t) {
    const auto s = g.space(3);
    const auto one = Position::constant(3, 1.0);
    const auto ev = EventMask::from_bits(3, static_cast<unsigned long long>(g.integer(1, 7)));
    const std::vector<AcceptanceSet> sets{var_set(s, g.real(0.05, 0.9), 0), span_set(s, ev),
                                          shortfall_set(s, LossFunction::power(g.real(1, 3)), g.real(0.1, 2), 0)};
    for (const auto& a : sets) {
      const auto r = check_si_subject_pos(from_acceptance(a, one), Sampler(s, static_cast<std::uint64_t>(t)), 300);
      EXPECT_TRUE(r.passed()) << a.description() << ' ' << nlohmann::json(r).dump();
    }
  }
}

TEST(ClaimCompatibility, FlagsImpossibleClaims) {
  const auto liar = custom_functional(kU2, "claims everything", [](const Position& x) { return -std::min(x[0], x[1]); },
                                      FunctionalClaims{.monotone = true, .surplus_invariant = true, .s_additive = true},
                                      Position{1, 1});
  EXPECT_FALSE(check_claim_compatibility(liar, Sampler(kU2, 3), 100).passed());
  EXPECT_TRUE(check_claim_compatibility(max_loss(kU2), Sampler(kU2, 3), 100).passed());
}
