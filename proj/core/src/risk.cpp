#include "surplus/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "surplus/error.hpp"

namespace surplus {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_level(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("risk level alpha must lie in (0,1)");
}

void check_prior(const ScenarioSpace& space, std::size_t prior) {
  if (prior >= space.prior_count()) throw InputError("unknown prior index");
}

nlohmann::json value_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

std::vector<Atom> atoms(const ScenarioSpace& space, const Position& x, std::size_t prior) {
  space.check(x);
  check_prior(space, prior);
  auto w = space.weights(prior);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (w[i] > 0.0) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<Atom> out;
  for (std::size_t i : order) {
    if (!out.empty() && out.back().value == x[i]) out.back().mass += w[i];
    else out.push_back(Atom{x[i], w[i]});
  }
  return out;
}

double var(const ScenarioSpace& space, const Position& x, double alpha, std::size_t prior) {
  check_level(alpha);
  const auto as = atoms(space, x, prior);
  // P(X < t) equals the cumulative mass of atoms strictly below t, so the
  // supremum of {t : P(X < t) <= alpha} is the first atom at which the
  // cumulative mass including it exceeds alpha.
  double below = 0.0;
  for (const Atom& a : as) {
    if (below + a.mass > alpha) return -a.value;
    below += a.mass;
  }
  return -as.back().value;
}

double es(const ScenarioSpace& space, const Position& x, double alpha, std::size_t prior) {
  check_level(alpha);
  const auto as = atoms(space, x, prior);
  // beta -> VaR_beta(X) equals -value_j on [C_{j-1}, C_j).
  double below = 0.0;
  double integral = 0.0;
  for (const Atom& a : as) {
    const double len = std::min(below + a.mass, alpha) - below;
    if (len <= 0.0) break;
    integral += -a.value * len;
    below += a.mass;
    if (below >= alpha) break;
  }
  if (below < alpha) integral += -as.back().value * (alpha - below);
  return integral / alpha;
}

double shortfall(const ScenarioSpace& space, const Position& x, const LossFunction& loss, std::size_t prior) {
  space.check(x);
  check_prior(space, prior);
  auto w = space.weights(prior);
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (w[i] > 0.0 && x[i] < 0.0) total += w[i] * loss(-x[i]);
  return total;
}

bool span_accept(const ScenarioSpace& space, const Position& x, const EventMask& e, std::size_t prior) {
  space.check(x);
  space.check(e);
  check_prior(space, prior);
  auto w = space.weights(prior);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (e[i] && w[i] > 0.0 && x[i] < 0.0) return false;
  return true;
}

double expectation(const ScenarioSpace& space, const Position& x, std::size_t prior) {
  space.check(x);
  check_prior(space, prior);
  auto w = space.weights(prior);
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (w[i] > 0.0) total += w[i] * x[i];
  return total;
}

std::string to_string(FunctionalKind k) {
  switch (k) {
    case FunctionalKind::var: return "var";
    case FunctionalKind::es: return "es";
    case FunctionalKind::shortfall: return "shortfall";
    case FunctionalKind::expectation_loss: return "expectation_loss";
    case FunctionalKind::max_loss: return "max_loss";
    case FunctionalKind::worst_loss: return "worst_loss";
    case FunctionalKind::from_acceptance: return "from_acceptance";
    case FunctionalKind::custom: return "custom";
  }
  return "custom";
}

RiskFunctional::RiskFunctional(ScenarioSpace space, FunctionalKind kind, std::string description, Evaluator eval,
                               FunctionalClaims claims, std::optional<Position> payoff, FunctionalParams params)
    : space_(std::move(space)),
      kind_(kind),
      description_(std::move(description)),
      eval_(std::move(eval)),
      claims_(claims),
      payoff_(std::move(payoff)),
      params_(std::move(params)) {
  if (!eval_) throw InputError("risk functional '" + description_ + "' has no evaluator");
  if (payoff_) {
    space_.check(*payoff_);
    payoff_ = space_.canonical(*payoff_);
    if (!is_nonnegative(*payoff_) || max_abs(*payoff_) == 0.0)
      throw InputError("payoff S must be nonnegative and nonzero");
  }
}

double RiskFunctional::operator()(const Position& x) const {
  const double v = eval_(space_.canonical(x));
  if (std::isnan(v)) throw ContractError("risk functional '" + description_ + "' returned NaN");
  if (v == -kInf) throw ContractError("risk functional '" + description_ + "' returned -inf");
  return v;
}

RiskFunctional var_functional(const ScenarioSpace& space, double alpha, std::size_t prior) {
  check_level(alpha);
  check_prior(space, prior);
  auto sp = std::make_shared<const ScenarioSpace>(space);
  return RiskFunctional(
      space, FunctionalKind::var, "VaR_" + std::to_string(alpha),
      [sp, alpha, prior](const Position& x) { return var(*sp, x, alpha, prior); },
      FunctionalClaims{false, true, false, true, true}, Position::constant(space.size(), 1.0),
      FunctionalParams{alpha, prior, std::nullopt});
}

RiskFunctional es_functional(const ScenarioSpace& space, double alpha, std::size_t prior) {
  check_level(alpha);
  check_prior(space, prior);
  auto sp = std::make_shared<const ScenarioSpace>(space);
  return RiskFunctional(
      space, FunctionalKind::es, "ES_" + std::to_string(alpha),
      [sp, alpha, prior](const Position& x) { return es(*sp, x, alpha, prior); },
      FunctionalClaims{true, true, false, false, true}, Position::constant(space.size(), 1.0),
      FunctionalParams{alpha, prior, std::nullopt});
}

RiskFunctional shortfall_functional(const ScenarioSpace& space, LossFunction loss, std::size_t prior,
                                    std::optional<Position> payoff) {
  check_prior(space, prior);
  auto sp = std::make_shared<const ScenarioSpace>(space);
  auto l = std::make_shared<const LossFunction>(loss);
  const bool convex = loss.convex();
  return RiskFunctional(
      space, FunctionalKind::shortfall, "E[l(X^-)]",
      [sp, l, prior](const Position& x) { return shortfall(*sp, x, *l, prior); },
      FunctionalClaims{convex, true, true, true, false}, std::move(payoff),
      FunctionalParams{0.0, prior, std::move(loss)});
}

RiskFunctional expectation_loss(const ScenarioSpace& space, std::size_t prior) {
  check_prior(space, prior);
  auto sp = std::make_shared<const ScenarioSpace>(space);
  return RiskFunctional(
      space, FunctionalKind::expectation_loss, "E[-X]",
      [sp, prior](const Position& x) { return -expectation(*sp, x, prior); },
      FunctionalClaims{true, true, false, false, true}, Position::constant(space.size(), 1.0),
      FunctionalParams{0.0, prior, std::nullopt});
}

RiskFunctional max_loss(const ScenarioSpace& space) {
  const EventMask support = space.support();
  return RiskFunctional(
      space, FunctionalKind::max_loss, "max(-X)",
      [support](const Position& x) {
        double m = -kInf;
        for (std::size_t i = 0; i < x.size(); ++i)
          if (support[i]) m = std::max(m, -x[i]);
        return m;
      },
      FunctionalClaims{true, true, false, true, true}, Position::constant(space.size(), 1.0));
}

RiskFunctional worst_loss(const ScenarioSpace& space) {
  const EventMask support = space.support();
  return RiskFunctional(
      space, FunctionalKind::worst_loss, "max(X^-)",
      [support](const Position& x) {
        double m = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
          if (support[i]) m = std::max(m, -x[i]);
        return m;
      },
      FunctionalClaims{true, true, true, true, false});
}

RiskFunctional custom_functional(const ScenarioSpace& space, std::string description, RiskFunctional::Evaluator eval,
                                 FunctionalClaims claims, std::optional<Position> payoff) {
  return RiskFunctional(space, FunctionalKind::custom, std::move(description), std::move(eval), claims,
                        std::move(payoff));
}

RiskFunctional from_acceptance(const AcceptanceSet& a, const Position& payoff, FromAcceptanceOptions opts) {
  if (!a.claims().monotone) throw ClaimError("from_acceptance requires a set that claims monotonicity");
  const ScenarioSpace& space = a.space();
  space.check(payoff);
  const Position s = space.canonical(payoff);
  double s_min = kInf;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0.0) throw InputError("payoff S must be nonnegative");
    if (space.support()[i]) s_min = std::min(s_min, s[i]);
  }
  if (!(s_min > 0.0)) throw InputError("payoff S must be strictly positive on the support");

  auto set = std::make_shared<const AcceptanceSet>(a);
  auto eval = [set, s, s_min, opts](const Position& x) {
    auto ok = [&](double m) { return set->contains(x + s * m); };
    const double step = std::max(max_abs(x) / s_min, 1.0);
    double lo;
    double hi;
    if (ok(step)) {
      hi = step;
      lo = -step;
      while (ok(lo)) {
        hi = lo;
        lo *= 2.0;
        if (lo < -opts.m_max) throw ContractError("capital requirement is -inf (acceptable at every level)");
      }
    } else {
      lo = step;
      hi = 2.0 * step;
      while (!ok(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > opts.m_max) return kInf;
      }
    }
    for (int it = 0; it < 400; ++it) {
      if (hi - lo <= opts.tolerance * std::max(1.0, std::abs(hi))) break;
      const double mid = lo + 0.5 * (hi - lo);
      if (mid <= lo || mid >= hi) break;
      if (ok(mid)) hi = mid;
      else lo = mid;
    }
    return hi;
  };
  const bool si = a.claims().surplus_invariant;
  return RiskFunctional(space, FunctionalKind::from_acceptance, "inf{m : X + mS in " + a.description() + "}", eval,
                        FunctionalClaims{a.claims().convex, true, false, si, true}, s);
}

AcceptanceSet sublevel_set(const RiskFunctional& rho) {
  auto r = std::make_shared<const RiskFunctional>(rho);
  const auto& c = rho.claims();
  return AcceptanceSet(rho.space(), SetKind::sublevel, "{" + rho.description() + " <= 0}",
                       [r](const Position& x) { return (*r)(x) <= 0.0; },
                       SetClaims{c.convex, false, c.monotone, c.surplus_invariant});
}

LawReport check_s_additive(const RiskFunctional& rho, const Sampler& sampler, std::uint64_t trials) {
  if (!rho.payoff()) throw ClaimError("check_s_additive needs a functional with a payoff S");
  LawReport r;
  r.law = "s-additivity";
  r.seed = sampler.seed();
  r.trials = trials;
  const Position& s = *rho.payoff();
  std::uint64_t compared = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const Position x = sampler.draw(t);
    Rng rng = trial_rng(sampler.seed(), t, 6);
    const double m = uniform(rng, -sampler.mix().box, sampler.mix().box);
    const double base = rho(x);
    const double shifted = rho(x + s * m);
    if (std::isinf(base) || std::isinf(shifted)) continue;
    ++compared;
    const double gap = shifted - base + m;
    if (std::abs(gap) > 1e-8) {
      r.verdict = Verdict::counterexample;
      r.witness = {{"X", to_json(x)},  {"m", m},     {"rho(X)", base}, {"rho(X+mS)", shifted},
                   {"gap", gap},      {"trial", t}};
      r.trials = t + 1;
      return r;
    }
  }
  if (compared == 0) r.flags.push_back("vacuous: no finite pairs");
  return r;
}

LawReport check_si_subject_pos(const RiskFunctional& rho, const Sampler& sampler, std::uint64_t trials) {
  LawReport r;
  r.law = "si-subject-to-positivity";
  r.seed = sampler.seed();
  r.trials = trials;
  std::uint64_t tested = 0;
  for (std::uint64_t t = 0; t < trials && r.passed(); ++t) {
    const Position x = sampler.draw(t);
    const double v = rho(x);
    if (!(v > 0.0)) continue;
    ++tested;
    const Position loss = -neg_part(x);
    const double vl = rho(loss);
    const bool equal = (std::isinf(v) && std::isinf(vl)) || std::abs(v - vl) <= 1e-8;
    if (!equal) {
      r.verdict = Verdict::counterexample;
      r.witness = {{"X", to_json(x)}, {"rho(X)", value_json(v)}, {"rho(-X^-)", value_json(vl)}, {"trial", t}};
      r.trials = t + 1;
    }
  }
  if (tested == 0) r.flags.push_back("vacuous: no sampled position with positive risk");

  const auto& c = rho.claims();
  if (rho.payoff() && c.s_additive && c.monotone) {
    const AcceptanceSet level = sublevel_set(rho);
    const LawReport si = check_surplus_invariant(level, sampler, trials);
    r.witness["cross_check_surplus_invariance"] = to_string(si.verdict);
    if (si.passed() != r.passed()) {
      r.flags.push_back("cross-check-disagrees");
      if (r.passed()) {
        r.verdict = Verdict::counterexample;
        r.witness["sublevel_witness"] = si.witness;
      }
    }
  }
  return r;
}

LawReport check_claim_compatibility(const RiskFunctional& rho, const Sampler& sampler, std::uint64_t trials) {
  LawReport r;
  r.law = "si-s-additivity-compatibility";
  r.seed = sampler.seed();
  r.trials = trials;
  const auto& c = rho.claims();
  if (!(c.monotone && c.surplus_invariant && c.s_additive && rho.payoff())) {
    r.flags.push_back("no conflicting claims");
    return r;
  }
  const Position& s = *rho.payoff();
  const std::size_t n = rho.space().size();
  const double at_zero = rho(Position::zeros(n));
  for (std::uint64_t t = 0; t < trials; ++t) {
    const Position x = sampler.draw(t);
    const double v = rho(x);
    if (std::isinf(v) || std::isinf(at_zero)) continue;
    // With all three claims, rho(X) - m = rho(-(X + mS)^-) >= rho(0) for
    // every m; m = rho(X) - rho(0) + 1 breaks it.
    const double m = v - at_zero + 1.0;
    const Position shifted = x + s * m;
    r.verdict = Verdict::counterexample;
    r.witness = {{"X", to_json(x)},
                 {"m", m},
                 {"rho(X)-m", v - m},
                 {"rho(X+mS)", value_json(rho(shifted))},
                 {"rho(-(X+mS)^-)", value_json(rho(-neg_part(shifted)))},
                 {"rho(0)", at_zero},
                 {"trial", t}};
    r.trials = t + 1;
    return r;
  }
  r.flags.push_back("vacuous: functional is +inf on every sampled position");
  return r;
}

}  // namespace surplus
