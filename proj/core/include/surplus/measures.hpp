#pragma once

#include <cstddef>
#include <vector>

#include "surplus/loss.hpp"
#include "surplus/scenario.hpp"

namespace surplus {

/// Distinct payoff value with its probability mass under one prior.
struct Atom {
  double value;
  double mass;
};

/// Atoms of X under prior k, sorted by value. Zero-mass scenarios are
/// dropped; equal values are merged with masses summed in scenario order.
std::vector<Atom> atoms(const ScenarioSpace& space, const Position& x, std::size_t prior);

/// Value at Risk, inf{m : P(X + m < 0) <= alpha}. Computed exactly as
/// -t* with t* = sup{t : P(X < t) <= alpha}, scanning the mass strictly
/// below each atom. Throws InputError unless 0 < alpha < 1.
double var(const ScenarioSpace& space, const Position& x, double alpha, std::size_t prior);

/// Expected Shortfall, (1/alpha) times the integral of beta -> VaR_beta(X)
/// over (0, alpha]. The integrand is a step function with breakpoints at
/// the cumulative masses, so the integral is a finite sum.
double es(const ScenarioSpace& space, const Position& x, double alpha, std::size_t prior);

/// E_P[loss(X^-)].
double shortfall(const ScenarioSpace& space, const Position& x, const LossFunction& loss, std::size_t prior);

/// True iff no scenario of E charged by the prior has a negative payoff.
bool span_accept(const ScenarioSpace& space, const Position& x, const EventMask& e, std::size_t prior);

/// E_P[X].
double expectation(const ScenarioSpace& space, const Position& x, std::size_t prior);

}  // namespace surplus
