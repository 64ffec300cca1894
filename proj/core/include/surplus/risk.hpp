#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "surplus/acceptance.hpp"
#include "surplus/loss.hpp"
#include "surplus/measures.hpp"
#include "surplus/report.hpp"
#include "surplus/sampler.hpp"
#include "surplus/scenario.hpp"

namespace surplus {

enum class FunctionalKind { var, es, shortfall, expectation_loss, max_loss, worst_loss, from_acceptance, custom };

std::string to_string(FunctionalKind k);

struct FunctionalClaims {
  bool convex = false;
  bool monotone = false;
  bool surplus_invariant = false;
  bool si_subject_pos = false;
  bool s_additive = false;
};

/// Parameters that identify a built-in, so that duality can use closed
/// forms instead of numeric search.
struct FunctionalParams {
  double alpha = 0.0;
  std::size_t prior = 0;
  std::optional<LossFunction> loss;
};

/// Map from positions to (-inf, +inf]. Evaluation canonicalizes the
/// argument; +inf is a legitimate value, -inf and NaN raise ContractError.
class RiskFunctional {
public:
  using Evaluator = std::function<double(const Position&)>;

  RiskFunctional(ScenarioSpace space, FunctionalKind kind, std::string description, Evaluator eval,
                 FunctionalClaims claims, std::optional<Position> payoff = std::nullopt, FunctionalParams params = {});

  double operator()(const Position& x) const;

  const ScenarioSpace& space() const noexcept { return space_; }
  FunctionalKind kind() const noexcept { return kind_; }
  const std::string& description() const noexcept { return description_; }
  const FunctionalClaims& claims() const noexcept { return claims_; }
  /// The payoff S of S-additivity, if any.
  const std::optional<Position>& payoff() const noexcept { return payoff_; }
  const FunctionalParams& params() const noexcept { return params_; }

private:
  ScenarioSpace space_;
  FunctionalKind kind_;
  std::string description_;
  Evaluator eval_;
  FunctionalClaims claims_;
  std::optional<Position> payoff_;
  FunctionalParams params_;
};

RiskFunctional var_functional(const ScenarioSpace& space, double alpha, std::size_t prior);
RiskFunctional es_functional(const ScenarioSpace& space, double alpha, std::size_t prior);
/// X -> E_P[loss(X^-)]. Surplus invariant; not S-additive, although a
/// payoff may be attached so that S-additivity can be tested.
RiskFunctional shortfall_functional(const ScenarioSpace& space, LossFunction loss, std::size_t prior,
                                    std::optional<Position> payoff = std::nullopt);
/// X -> E_P[-X].
RiskFunctional expectation_loss(const ScenarioSpace& space, std::size_t prior);
/// X -> max over the support of -X_i, the capital needed to make X >= 0.
RiskFunctional max_loss(const ScenarioSpace& space);
/// X -> max over the support of X_i^-, the largest shortfall.
RiskFunctional worst_loss(const ScenarioSpace& space);
RiskFunctional custom_functional(const ScenarioSpace& space, std::string description,
                                 RiskFunctional::Evaluator eval, FunctionalClaims claims,
                                 std::optional<Position> payoff = std::nullopt);

struct FromAcceptanceOptions {
  double m_max = 1e12;
  double tolerance = 1e-10;
};

/// rho(X) = inf{m : X + m S in A}. Brackets m by doubling from
/// ||X||_inf / min S, then bisects; returns the acceptable end of the
/// final bracket, so X + rho(X) S lies in A. +inf when nothing up to
/// m_max is acceptable; ContractError when everything down to -m_max is.
/// Throws ClaimError if A does not claim monotonicity and InputError if S
/// has a zero or negative entry on the support.
RiskFunctional from_acceptance(const AcceptanceSet& a, const Position& payoff, FromAcceptanceOptions opts = {});

/// {rho <= 0} as a membership oracle.
AcceptanceSet sublevel_set(const RiskFunctional& rho);

/// |rho(X + m S) - rho(X) + m| <= 1e-8 on random (X, m) where both values
/// are finite. Throws ClaimError if rho has no payoff S.
LawReport check_s_additive(const RiskFunctional& rho, const Sampler& sampler, std::uint64_t trials);

/// rho(X) > 0 implies |rho(X) - rho(-X^-)| <= 1e-8. When rho claims
/// S-additivity and monotonicity, surplus invariance of {rho <= 0} is
/// checked with the same sampler and the two verdicts must agree.
LawReport check_si_subject_pos(const RiskFunctional& rho, const Sampler& sampler, std::uint64_t trials);

/// A monotone functional cannot be surplus invariant, S-additive and
/// finite somewhere. If rho claims all three, evaluates the chain
/// rho(X) - m = rho(X + m S) = rho(-(X + m S)^-) >= rho(0) at a sampled
/// finite point and reports the contradiction.
LawReport check_claim_compatibility(const RiskFunctional& rho, const Sampler& sampler, std::uint64_t trials);

}  // namespace surplus
