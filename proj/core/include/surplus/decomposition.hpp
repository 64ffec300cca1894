#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "surplus/acceptance.hpp"
#include "surplus/report.hpp"
#include "surplus/sampler.hpp"
#include "surplus/scenario.hpp"

namespace surplus {

/// Splits the quasi-sure support of a convex, monotone, surplus-invariant
/// set into E1 (no loss acceptable), E2 (bounded losses acceptable) and
/// E3 (any loss acceptable). On E2 the acceptable loss profiles form the
/// solid set D; on finite spaces bands are coordinate sets, so scanning
/// one scenario at a time finds the three events.
class Decomposition {
public:
  Decomposition(AcceptanceSet set, EventMask e1, EventMask e2, EventMask e3, std::vector<double> loss_capacity,
                double probe_bound, std::vector<std::string> flags);

  const AcceptanceSet& set() const noexcept { return set_; }
  const EventMask& e1() const noexcept { return e1_; }
  const EventMask& e2() const noexcept { return e2_; }
  const EventMask& e3() const noexcept { return e3_; }
  /// Probed sup{t >= 0 : -t e_i in A}, capped at the probe bound; 0 off
  /// the support.
  const std::vector<double>& loss_capacity() const noexcept { return capacity_; }
  double probe_bound() const noexcept { return probe_bound_; }
  const std::vector<std::string>& flags() const noexcept { return flags_; }

  /// W in D: W >= 0, W = 0 on the support outside E2, and -W in A.
  bool in_D(const Position& w) const;

private:
  AcceptanceSet set_;
  EventMask e1_;
  EventMask e2_;
  EventMask e3_;
  std::vector<double> capacity_;
  double probe_bound_;
  std::vector<std::string> flags_;
};

/// Per-scenario bisection of the loss capacity up to t_max (tolerance
/// 1e-9 max(1, s)). Scenarios whose capacity reaches t_max go to E3 with
/// an "unbounded within probe" flag unless the set certifies unbounded
/// capacity analytically; capacities in (t_max/2, t_max) add
/// "probe-censored". Throws ClaimError unless the set claims convexity,
/// monotonicity and surplus invariance.
Decomposition decompose(const AcceptanceSet& a, double t_max = 1e9);

/// X in A iff X >= 0 on E1 and (1_{E2} X)^- in D.
LawReport verify_reconstruction(const AcceptanceSet& a, const Decomposition& dec, const Sampler& sampler,
                                std::uint64_t trials);
/// Every sampled nonzero W in D leaves D under scaling before the probe
/// bound.
LawReport check_radially_bounded_D(const Decomposition& dec, const Sampler& sampler, std::uint64_t trials);
/// Every scenario in E2 (and, with several priors, every sampled
/// sub-event of E2 of positive capacity) is charged by some W in D.
LawReport check_support_condition(const Decomposition& dec, const Sampler& sampler, std::uint64_t trials);
/// Sampled directions recede from 0 iff they are nonnegative on E1 and
/// E2; both V and -V recede iff V vanishes there.
LawReport recession_lineality(const AcceptanceSet& a, const Decomposition& dec, const Sampler& sampler,
                              std::uint64_t trials);

void to_json(nlohmann::json& j, const Decomposition& d);

}  // namespace surplus
