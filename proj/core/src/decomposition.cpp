#include "surplus/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "surplus/error.hpp"
#include "surplus/robust.hpp"

namespace surplus {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

nlohmann::json labels_of(const ScenarioSpace& space, const EventMask& e) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i : e.indices()) out.push_back(space.labels()[i]);
  return out;
}

}  // namespace

Decomposition::Decomposition(AcceptanceSet set, EventMask e1, EventMask e2, EventMask e3,
                             std::vector<double> loss_capacity, double probe_bound, std::vector<std::string> flags)
    : set_(std::move(set)),
      e1_(std::move(e1)),
      e2_(std::move(e2)),
      e3_(std::move(e3)),
      capacity_(std::move(loss_capacity)),
      probe_bound_(probe_bound),
      flags_(std::move(flags)) {
  const auto& space = set_.space();
  space.check(e1_);
  space.check(e2_);
  space.check(e3_);
  if (!(e1_ & e2_).empty() || !(e1_ & e3_).empty() || !(e2_ & e3_).empty())
    throw ContractError("decomposition events must be disjoint");
  if (!((e1_ | e2_ | e3_) == space.support())) throw ContractError("decomposition events must cover the support");
}

bool Decomposition::in_D(const Position& w) const {
  const auto& space = set_.space();
  space.check(w);
  const auto sup = space.support();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0.0) return false;
    if (sup[i] && !e2_[i] && w[i] != 0.0) return false;
  }
  return set_.contains(-w);
}

Decomposition decompose(const AcceptanceSet& a, double t_max) {
  const auto& c = a.claims();
  if (!c.convex || !c.monotone || !c.surplus_invariant)
    throw ClaimError("decomposition needs a convex, monotone, surplus-invariant set");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InputError("probe bound must be positive and finite");
  const auto& space = a.space();
  const std::size_t n = space.size();
  const auto sup = space.support();
  std::vector<std::string> flags;
  if (!a.closed_by_construction()) flags.emplace_back("order-closedness-unverified");
  if (!a.contains(Position::zeros(n))) throw InputError("decomposition needs a set containing 0");

  EventMask e1 = EventMask::none(n);
  EventMask e2 = EventMask::none(n);
  EventMask e3 = EventMask::none(n);
  std::vector<double> cap(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!sup[i]) continue;
    auto accepts = [&](double t) { return a.contains(Position::unit(n, i) * -t); };
    if (accepts(t_max)) {
      cap[i] = t_max;
      e3.set(i, true);
      const auto analytic = a.analytic_loss_capacity(i);
      if (!(analytic && std::isinf(*analytic)))
        flags.push_back("unbounded within probe: " + space.labels()[i]);
      continue;
    }
    double lo = 0.0;
    double hi = t_max;
    while (hi - lo > 1e-9 * std::max(1.0, lo)) {
      const double mid = 0.5 * (lo + hi);
      if (accepts(mid)) lo = mid;
      else hi = mid;
    }
    cap[i] = lo;
    if (lo == 0.0) e1.set(i, true);
    else e2.set(i, true);
    if (lo > 0.5 * t_max) flags.push_back("probe-censored: " + space.labels()[i]);
    const auto analytic = a.analytic_loss_capacity(i);
    if (analytic && std::abs(*analytic - lo) > 1e-8 * std::max(1.0, std::min(*analytic, t_max)) &&
        !(lo == 0.0 && *analytic < 1e-9))
      flags.push_back("analytic-capacity-disagrees: " + space.labels()[i]);
  }
  return Decomposition(a, e1, e2, e3, cap, t_max, flags);
}

LawReport verify_reconstruction(const AcceptanceSet& a, const Decomposition& dec, const Sampler& sampler,
                                std::uint64_t trials) {
  LawReport r;
  r.law = "decomposition-reconstruction";
  r.seed = sampler.seed();
  r.flags = dec.flags();
  Sampler local = sampler;
  local.set_boundary_oracle([&a](const Position& x) { return a.contains(x); });
  const auto& e1 = dec.e1();
  for (std::uint64_t t = 0; t < trials; ++t) {
    const Position x = local.draw(t);
    const bool lhs = a.contains(x);
    bool e1_ok = true;
    for (std::size_t i : e1.indices()) e1_ok = e1_ok && x[i] >= 0.0;
    const bool rhs = e1_ok && dec.in_D(neg_part(band_project(x, dec.e2())));
    ++r.trials;
    if (lhs != rhs) {
      r.verdict = Verdict::counterexample;
      r.witness = {{"X", to_json(x)}, {"in_A", lhs}, {"reconstructed", rhs}, {"trial", t}};
      return r;
    }
  }
  return r;
}

LawReport check_radially_bounded_D(const Decomposition& dec, const Sampler& sampler, std::uint64_t trials) {
  LawReport r;
  r.law = "D-radially-bounded";
  r.seed = sampler.seed();
  if (dec.e2().empty()) {
    r.flags.emplace_back("vacuous");
    return r;
  }
  double worst = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = trial_rng(sampler.seed(), t, 0xd0);
    Position w = band_project(sampler.draw_nonnegative(rng), dec.e2());
    if (max_abs(w) == 0.0) continue;
    int halvings = 0;
    while (!dec.in_D(w) && halvings < 80) {
      w *= 0.5;
      ++halvings;
    }
    if (!dec.in_D(w)) continue;
    ++r.trials;
    // lambda_W: smallest probed scale from which every larger probe is rejected.
    double lambda_w = kInf;
    std::vector<double> probes;
    for (double lam = 1.0; lam <= dec.probe_bound(); lam *= 2.0) probes.push_back(lam);
    probes.push_back(dec.probe_bound());
    for (auto it = probes.rbegin(); it != probes.rend(); ++it) {
      if (dec.in_D(w * *it)) break;
      lambda_w = *it;
    }
    if (std::isinf(lambda_w)) {
      r.verdict = Verdict::counterexample;
      r.witness = {{"W", to_json(w)}, {"accepted_at", dec.probe_bound()}, {"trial", t}};
      return r;
    }
    worst = std::max(worst, lambda_w);
  }
  if (r.trials == 0) r.flags.emplace_back("vacuous");
  else r.witness = {{"largest_lambda", worst}};
  return r;
}

LawReport check_support_condition(const Decomposition& dec, const Sampler& sampler, std::uint64_t trials) {
  LawReport r;
  r.law = "D-support-condition";
  r.seed = sampler.seed();
  const auto& space = dec.set().space();
  const std::size_t n = space.size();
  const auto e2 = dec.e2().indices();
  if (e2.empty()) {
    r.flags.emplace_back("vacuous");
    return r;
  }
  nlohmann::json witnesses = nlohmann::json::object();
  std::vector<Position> per_scenario(n, Position::zeros(n));
  for (std::size_t i : e2) {
    ++r.trials;
    Position w = Position::unit(n, i) * (0.5 * dec.loss_capacity()[i]);
    if (!(w[i] > 0.0) || !dec.in_D(w)) {
      r.verdict = Verdict::counterexample;
      r.witness = {{"scenario", space.labels()[i]}, {"capacity", dec.loss_capacity()[i]}};
      return r;
    }
    per_scenario[i] = w;
    witnesses[space.labels()[i]] = to_json(w);
  }
  if (space.prior_count() > 1) {
    // Sub-events of E2 with positive capacity.
    std::vector<EventMask> events;
    if (e2.size() <= 12) {
      for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << e2.size()); ++bits) {
        EventMask e = EventMask::none(n);
        for (std::size_t k = 0; k < e2.size(); ++k)
          if (bits >> k & 1U) e.set(e2[k], true);
        events.push_back(e);
      }
    } else {
      r.flags.emplace_back("events-sampled");
      for (std::uint64_t t = 0; t < trials; ++t) {
        Rng rng = trial_rng(sampler.seed(), t, 0x5e);
        EventMask e = EventMask::none(n);
        for (std::size_t i : e2) e.set(i, uniform(rng, 0.0, 1.0) < 0.5);
        if (!e.empty()) events.push_back(e);
      }
    }
    for (const auto& e : events) {
      if (capacity(space, e) <= 0.0) continue;
      ++r.trials;
      const std::size_t i = e.indices().front();
      if (max_abs(band_project(per_scenario[i], e)) == 0.0) {
        r.verdict = Verdict::counterexample;
        r.witness = {{"event", labels_of(space, e)}};
        return r;
      }
    }
  }
  r.witness = {{"witnesses", witnesses}};
  return r;
}

LawReport recession_lineality(const AcceptanceSet& a, const Decomposition& dec, const Sampler& sampler,
                              std::uint64_t trials) {
  LawReport r;
  r.law = "recession-lineality";
  r.seed = sampler.seed();
  const auto& space = a.space();
  const std::size_t n = space.size();
  const Position x0 = Position::zeros(n);
  std::vector<double> probes;
  for (double t = 1.0; t < dec.probe_bound(); t *= 10.0) probes.push_back(t);
  probes.push_back(dec.probe_bound());
  auto recedes = [&](const Position& v) {
    return std::all_of(probes.begin(), probes.end(), [&](double t) { return a.contains(x0 + v * t); });
  };
  const EventMask bounded = dec.e1() | dec.e2();
  // Predicted by the decomposition; nullopt when the probe cannot see the
  // violation (a loss direction too shallow to exhaust the capacity).
  auto predicted = [&](const Position& v) -> std::optional<bool> {
    for (std::size_t i : bounded.indices()) {
      if (v[i] >= 0.0) continue;
      if (-v[i] * dec.probe_bound() <= dec.loss_capacity()[i]) return std::nullopt;
      return false;
    }
    return true;
  };
  std::vector<Position> dirs;
  dirs.push_back(Position::zeros(n));
  for (std::size_t i : space.support().indices()) {
    dirs.push_back(Position::unit(n, i));
    dirs.push_back(-Position::unit(n, i));
  }
  for (std::uint64_t t = 0; t < trials; ++t) dirs.push_back(sampler.draw(t, 0x4ec));
  std::uint64_t censored = 0;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const Position& v = dirs[k];
    const auto want = predicted(v);
    const auto want_neg = predicted(-v);
    if (!want || !want_neg) {
      ++censored;
      continue;
    }
    ++r.trials;
    const bool rec = recedes(v);
    const bool lin = rec && recedes(-v);
    bool lin_expected = true;
    for (std::size_t i : bounded.indices()) lin_expected = lin_expected && v[i] == 0.0;
    if (rec != *want || lin != lin_expected) {
      r.verdict = Verdict::counterexample;
      r.witness = {{"V", to_json(v)},       {"recedes", rec},       {"predicted", *want},
                   {"lineality", lin},      {"lineality_predicted", lin_expected}};
      return r;
    }
  }
  if (censored > 0) r.flags.push_back("probe-censored directions: " + std::to_string(censored));
  return r;
}

void to_json(nlohmann::json& j, const Decomposition& d) {
  const auto& space = d.set().space();
  j = nlohmann::json{{"E1", labels_of(space, d.e1())},
                     {"E2", labels_of(space, d.e2())},
                     {"E3", labels_of(space, d.e3())},
                     {"flags", d.flags()},
                     {"probe_bound", d.probe_bound()}};
}

}  // namespace surplus
