#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "surplus/loss.hpp"
#include "surplus/report.hpp"
#include "surplus/sampler.hpp"
#include "surplus/scenario.hpp"

namespace surplus {

enum class SetKind { var, es, span, shortfall, halfspace, box, positive_cone, whole, intersection, union_of, sublevel, custom };

std::string to_string(SetKind k);

/// Structural claims an acceptance set makes about itself. Checkers use
/// them as preconditions; they are not verified on construction.
struct SetClaims {
  bool convex = false;
  bool cone = false;
  bool monotone = false;
  bool surplus_invariant = false;
};

/// Acceptance set given by a membership oracle. Arguments are reduced to
/// their quasi-sure representative before the oracle sees them, so
/// membership only depends on the class of a position.
class AcceptanceSet {
public:
  using Oracle = std::function<bool(const Position&)>;
  /// Exact value of sup{t >= 0 : -t e_i in A}, possibly +inf.
  using LossCapacity = std::function<double(std::size_t)>;

  AcceptanceSet(ScenarioSpace space, SetKind kind, std::string description, Oracle oracle, SetClaims claims,
                LossCapacity capacity = {});

  const ScenarioSpace& space() const noexcept { return space_; }
  SetKind kind() const noexcept { return kind_; }
  const std::string& description() const noexcept { return description_; }
  const SetClaims& claims() const noexcept { return claims_; }

  bool contains(const Position& x) const;
  /// Membership in D = -A_-: true iff -W is acceptable. Throws InputError
  /// if W has a negative entry.
  bool in_D(const Position& w) const;

  /// Analytic loss capacity of scenario i, when the construction knows it.
  std::optional<double> analytic_loss_capacity(std::size_t i) const;
  bool has_analytic_capacity() const noexcept { return static_cast<bool>(capacity_); }

  /// Built-ins are order closed; user oracles are not known to be.
  bool closed_by_construction() const noexcept { return kind_ != SetKind::custom; }

private:
  ScenarioSpace space_;
  SetKind kind_;
  std::string description_;
  Oracle oracle_;
  SetClaims claims_;
  LossCapacity capacity_;
};

/// {VaR_alpha <= 0} under prior k.
AcceptanceSet var_set(const ScenarioSpace& space, double alpha, std::size_t prior);
/// {ES_alpha <= 0} under prior k. Convex cone, not surplus invariant.
AcceptanceSet es_set(const ScenarioSpace& space, double alpha, std::size_t prior);
/// SPAN-type set {P({X < 0} and E) = 0}. Without a prior, mass means
/// quasi-sure mass (any prior charging the scenario).
AcceptanceSet span_set(const ScenarioSpace& space, const EventMask& e, std::optional<std::size_t> prior = std::nullopt);
/// {E_P[loss(X^-)] <= level}, level >= 0.
AcceptanceSet shortfall_set(const ScenarioSpace& space, LossFunction loss, double level, std::size_t prior);
/// {E_P[X] >= 0}: monotone convex cone, not surplus invariant.
AcceptanceSet halfspace_set(const ScenarioSpace& space, std::size_t prior);
/// {X_i >= -bounds_i on the support}; bounds may be +inf (no constraint).
AcceptanceSet box_set(const ScenarioSpace& space, std::vector<double> loss_bounds);
/// {X >= 0 quasi-surely}.
AcceptanceSet positive_cone(const ScenarioSpace& space);
AcceptanceSet whole_space(const ScenarioSpace& space);
AcceptanceSet intersect(const std::vector<AcceptanceSet>& sets);
/// Union; convexity is never claimed.
AcceptanceSet unite(const std::vector<AcceptanceSet>& sets);
AcceptanceSet custom_set(const ScenarioSpace& space, std::string description, AcceptanceSet::Oracle oracle,
                         SetClaims claims);

bool contains(const AcceptanceSet& a, const Position& x);
bool in_D(const AcceptanceSet& a, const Position& w);

/// X in A, Y^- = X^- implies Y in A. Each trial draws X, builds Y = -X^-
/// plus a random surplus on {X >= 0}, and compares memberships.
LawReport check_surplus_invariant(const AcceptanceSet& a, const Sampler& sampler, std::uint64_t trials);

/// For monotone sets: (c) X in A implies -X^- in A; (d) X in A and
/// Y^- <= X^- imply Y in A; (e) X in A iff X^- in D; solidity of D.
/// Throws ClaimError unless the set claims monotonicity.
LawReport check_equivalences(const AcceptanceSet& a, const Sampler& sampler, std::uint64_t trials);

/// Same laws enumerated over every point of grid^n (n = number of
/// scenarios). The grid must be sorted and contain 0.
LawReport check_equivalences_grid(const AcceptanceSet& a, std::span<const double> grid);

/// 1_E X in A for X in A and every event E (all 2^n events for n <= 12,
/// 64 sampled events otherwise). Requires monotonicity.
LawReport check_band_stability(const AcceptanceSet& a, const Sampler& sampler, std::uint64_t trials);

/// Samples convexity violations of A and of D independently and passes
/// iff the two verdicts agree. Requires monotone and surplus invariant.
LawReport check_convexity_via_D(const AcceptanceSet& a, const Sampler& sampler, std::uint64_t trials);

nlohmann::json to_json(const Position& x);

}  // namespace surplus
