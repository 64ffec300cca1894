#include "surplus/duality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "surplus/error.hpp"
#include "surplus/lp.hpp"
#include "surplus/sampler.hpp"

namespace surplus {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDomainTol = 1e-12;
constexpr double kSumTol = 1e-10;

std::vector<std::size_t> support_indices(const ScenarioSpace& space) { return space.support().indices(); }

void check_dual(const ScenarioSpace& space, const DualElement& phi) {
  if (phi.density.size() != space.size()) throw InputError("dual element length does not match the scenario space");
  for (double v : phi.density)
    if (!std::isfinite(v)) throw InputError("dual element entries must be finite");
}

// Maximizes a concave function of one variable on [lo, hi].
std::pair<double, double> golden_max(const std::function<double(double)>& f, double lo, double hi, int iters) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < iters; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  std::pair<double, double> best = fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
  for (double t : {lo, hi}) {
    const double v = f(t);
    if (v > best.second) best = {t, v};
  }
  return best;
}

// Closed forms. Every built-in except shortfall has an indicator
// conjugate; the returned argmax is then 0 (its gradient inside the
// effective domain).
std::optional<ConjugateValue> closed_conjugate(const RiskFunctional& rho, const std::vector<double>& w) {
  const auto& space = rho.space();
  const auto sup = support_indices(space);
  const Position zero = Position::zeros(space.size());
  auto indicator = [&](bool ok) {
    ConjugateValue v;
    v.value = ok ? 0.0 : kInf;
    v.closed_form = true;
    if (ok) v.argmax = zero;
    return v;
  };
  auto simplex_sum = [&] {
    double s = 0.0;
    for (std::size_t i : sup) s += w[i];
    return s;
  };
  switch (rho.kind()) {
    case FunctionalKind::expectation_loss: {
      auto p = space.weights(rho.params().prior);
      bool ok = true;
      for (std::size_t i : sup) ok = ok && std::abs(w[i] + p[i]) <= kDomainTol;
      return indicator(ok);
    }
    case FunctionalKind::max_loss: {
      bool ok = std::abs(simplex_sum() + 1.0) <= kSumTol;
      for (std::size_t i : sup) ok = ok && w[i] <= kDomainTol;
      return indicator(ok);
    }
    case FunctionalKind::worst_loss: {
      bool ok = simplex_sum() >= -1.0 - kSumTol;
      for (std::size_t i : sup) ok = ok && w[i] <= kDomainTol;
      return indicator(ok);
    }
    case FunctionalKind::es: {
      auto p = space.weights(rho.params().prior);
      const double alpha = rho.params().alpha;
      bool ok = std::abs(simplex_sum() + 1.0) <= kSumTol;
      for (std::size_t i : sup) ok = ok && w[i] <= kDomainTol && -w[i] <= p[i] / alpha + kDomainTol;
      return indicator(ok);
    }
    case FunctionalKind::shortfall: {
      const auto& loss = rho.params().loss;
      if (!loss || !loss->convex() || loss->kind() == LossFunction::Kind::custom) return std::nullopt;
      auto p = space.weights(rho.params().prior);
      ConjugateValue v;
      v.closed_form = true;
      Position arg = zero;
      double total = 0.0;
      for (std::size_t i : sup) {
        if (w[i] > kDomainTol) return indicator(false);
        if (p[i] == 0.0) {
          if (std::abs(w[i]) > kDomainTol) return indicator(false);
          continue;
        }
        const double y = std::max(0.0, -w[i]) / p[i];
        const double c = loss->conjugate(y);
        if (std::isinf(c)) return indicator(false);
        total += p[i] * c;
        const double t = loss->conjugate_argmax(y);
        arg[i] = std::isfinite(t) ? -t : 0.0;
      }
      v.value = total;
      v.argmax = arg;
      return v;
    }
    default:
      return std::nullopt;
  }
}

ConjugateValue numeric_conjugate(const RiskFunctional& rho, const std::vector<double>& w, const ConjugateOptions& opts) {
  const auto& space = rho.space();
  const auto coords = support_indices(space);
  const std::size_t m = coords.size();
  auto embed = [&](const std::vector<double>& y) {
    Position x = Position::zeros(space.size());
    for (std::size_t k = 0; k < m; ++k) x[coords[k]] = y[k];
    return x;
  };
  auto h = [&](const std::vector<double>& y) {
    const Position x = embed(y);
    const double r = rho(x);
    if (std::isinf(r)) return -kInf;
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += w[coords[k]] * y[k];
    return s - r;
  };

  std::vector<double> best_y(m, 0.0);
  double best = h(best_y);
  Rng rng = trial_rng(opts.seed, 0, 0xc0de);

  auto line = [&](std::vector<double>& y, double& val, const std::vector<double>& d, double L) {
    double t_lo = -kInf;
    double t_hi = kInf;
    for (std::size_t k = 0; k < m; ++k) {
      if (d[k] == 0.0) continue;
      const double a = (-L - y[k]) / d[k];
      const double b = (L - y[k]) / d[k];
      t_lo = std::max(t_lo, std::min(a, b));
      t_hi = std::min(t_hi, std::max(a, b));
    }
    if (!(t_hi > t_lo)) return false;
    auto f = [&](double t) {
      std::vector<double> z = y;
      for (std::size_t k = 0; k < m; ++k) z[k] = std::clamp(y[k] + t * d[k], -L, L);
      return h(z);
    };
    const auto [t, v] = golden_max(f, t_lo, t_hi, 70);
    if (v > val) {
      for (std::size_t k = 0; k < m; ++k) y[k] = std::clamp(y[k] + t * d[k], -L, L);
      val = v;
      return true;
    }
    return false;
  };

  auto ascend = [&](std::vector<double> y, double L) {
    double val = h(y);
    for (int sweep = 0; sweep < 40; ++sweep) {
      const double before = val;
      std::vector<std::vector<double>> dirs;
      for (std::size_t k = 0; k < m; ++k) {
        std::vector<double> e(m, 0.0);
        e[k] = 1.0;
        dirs.push_back(e);
      }
      dirs.emplace_back(m, 1.0);
      for (std::size_t k = 0; k < 2 * m; ++k) {
        std::vector<double> d(m);
        for (auto& v : d) v = uniform(rng, -1.0, 1.0);
        dirs.push_back(d);
      }
      for (const auto& d : dirs) line(y, val, d, L);
      if (!(val - before > 1e-13 * std::max(1.0, std::abs(val)))) break;
    }
    return std::pair{y, val};
  };

  double prev = best;
  for (double L = 1.0;; L *= 2.0) {
    std::vector<std::vector<double>> starts{best_y};
    for (int s = 0; s < 2; ++s) {
      std::vector<double> y(m);
      for (auto& v : y) v = uniform(rng, -L, L);
      starts.push_back(y);
    }
    for (const auto& s : starts) {
      auto [y, val] = ascend(s, L);
      if (val > best) {
        best = val;
        best_y = y;
      }
    }
    if (L > 1.0 && best - prev <= opts.stall * std::max(1.0, std::abs(prev))) break;
    if (L >= opts.l_max) {
      ConjugateValue v;
      v.value = kInf;
      return v;
    }
    prev = best;
  }
  ConjugateValue v;
  v.value = best;
  v.argmax = embed(best_y);
  return v;
}

// Effective domain of rho* used by the projected ascent: a box plus an
// optional affine constraint a.w = rhs (or >= rhs), a >= 0.
struct Domain {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> a;
  double rhs = 0.0;
  bool has_affine = false;
  bool equality = true;
};

std::vector<double> clip(const std::vector<double>& v, const Domain& d, double tau) {
  std::vector<double> w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double t = d.has_affine ? v[i] + tau * d.a[i] : v[i];
    w[i] = std::clamp(t, d.lo[i], d.hi[i]);
  }
  return w;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> project(const std::vector<double>& v, const Domain& d) {
  if (!d.has_affine) return clip(v, d, 0.0);
  if (!d.equality) {
    auto w = clip(v, d, 0.0);
    if (dot(d.a, w) >= d.rhs) return w;
  }
  // a.clip(v + tau a) is nondecreasing in tau.
  double lo = -1.0;
  double hi = 1.0;
  while (dot(d.a, clip(v, d, lo)) > d.rhs) {
    lo *= 2.0;
    if (lo < -1e300) throw ContractError("dual domain is empty");
  }
  while (dot(d.a, clip(v, d, hi)) < d.rhs) {
    hi *= 2.0;
    if (hi > 1e300) throw ContractError("dual domain is empty");
  }
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (dot(d.a, clip(v, d, mid)) < d.rhs) lo = mid;
    else hi = mid;
  }
  const auto wl = clip(v, d, lo);
  const auto wh = clip(v, d, hi);
  return std::abs(dot(d.a, wl) - d.rhs) < std::abs(dot(d.a, wh) - d.rhs) ? wl : wh;
}

Domain make_domain(const RiskFunctional& rho, DualDomain which) {
  const auto& space = rho.space();
  const std::size_t n = space.size();
  const auto sup = space.support();
  Domain d;
  d.lo.assign(n, -kInf);
  d.hi.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (!sup[i]) d.lo[i] = 0.0;
  const auto& params = rho.params();
  switch (rho.kind()) {
    case FunctionalKind::expectation_loss: {
      auto p = space.weights(params.prior);
      for (std::size_t i = 0; i < n; ++i)
        if (sup[i]) d.lo[i] = d.hi[i] = -p[i];
      break;
    }
    case FunctionalKind::es: {
      auto p = space.weights(params.prior);
      for (std::size_t i = 0; i < n; ++i)
        if (sup[i]) d.lo[i] = -p[i] / params.alpha;
      break;
    }
    case FunctionalKind::worst_loss:
      d.has_affine = true;
      d.equality = false;
      d.a.assign(n, 1.0);
      d.rhs = -1.0;
      break;
    case FunctionalKind::shortfall: {
      if (!params.loss) break;
      auto p = space.weights(params.prior);
      double ymax = kInf;
      const auto& loss = *params.loss;
      if (loss.kind() == LossFunction::Kind::power && loss.exponent() == 1.0) ymax = 1.0;
      if (loss.kind() == LossFunction::Kind::piecewise_linear) ymax = loss.spec()["slopes"].back().get<double>();
      for (std::size_t i = 0; i < n; ++i)
        if (sup[i]) d.lo[i] = -p[i] * ymax;
      break;
    }
    default:
      break;
  }
  if (which == DualDomain::negative_with_s) {
    const auto& s = *rho.payoff();
    d.has_affine = true;
    d.equality = true;
    d.a.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (sup[i]) d.a[i] = s[i];
    d.rhs = -1.0;
  }
  return d;
}

}  // namespace

double apply(const DualElement& phi, const Position& x) {
  if (phi.density.size() != x.size()) throw InputError("dual element length does not match the position");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += phi.density[i] * x[i];
  return s;
}

DualElement against_prior(const ScenarioSpace& space, std::size_t prior, const std::vector<double>& z) {
  if (prior >= space.prior_count()) throw InputError("unknown prior index");
  if (z.size() != space.size()) throw InputError("density length does not match the scenario space");
  auto p = space.weights(prior);
  DualElement phi;
  phi.density.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) phi.density[i] = p[i] * z[i];
  return phi;
}

ConjugateValue conjugate_detail(const RiskFunctional& rho, const DualElement& phi, ConjugateOptions opts) {
  if (!rho.claims().convex || !rho.claims().monotone)
    throw ClaimError("conjugate needs a functional claiming convexity and monotonicity");
  check_dual(rho.space(), phi);
  if (auto v = closed_conjugate(rho, phi.density)) return *v;
  return numeric_conjugate(rho, phi.density, opts);
}

double conjugate_rho(const RiskFunctional& rho, const DualElement& phi, ConjugateOptions opts) {
  return conjugate_detail(rho, phi, opts).value;
}

DualReport biconjugate(const RiskFunctional& rho, const Position& x_in, DualDomain domain, BiconjugateOptions opts) {
  const auto& c = rho.claims();
  if (!c.convex || !c.monotone) throw ClaimError("biconjugate needs a convex monotone functional");
  if (domain == DualDomain::negative && !c.surplus_invariant)
    throw ClaimError("the negative dual domain needs a surplus-invariant functional");
  if (domain == DualDomain::negative_with_s && (!c.s_additive || !rho.payoff()))
    throw ClaimError("the S-additive dual domain needs an S-additive functional with a payoff");
  if (opts.restarts < 1 || opts.iterations < 1) throw InputError("biconjugate needs at least one restart and iteration");
  const auto& space = rho.space();
  const Position x = space.position(x_in.vector());
  const std::size_t n = space.size();
  const Domain dom = make_domain(rho, domain);
  const bool closed = closed_conjugate(rho, std::vector<double>(n, 0.0)).has_value();
  const int iters = closed ? opts.iterations : opts.numeric_iterations;
  ConjugateOptions copts;
  copts.seed = opts.seed;

  auto objective = [&](const std::vector<double>& w, Position* grad_arg) {
    const auto cv = conjugate_detail(rho, DualElement{w}, copts);
    if (grad_arg) *grad_arg = cv.argmax ? *cv.argmax : Position::zeros(n);
    if (std::isinf(cv.value)) return -kInf;
    return dot(w, x.vector()) - cv.value;
  };

  double xscale = 1.0;
  for (double v : x) xscale = std::max(xscale, std::abs(v));

  DualReport rep;
  rep.primal = rho(x);
  rep.dual = -kInf;
  std::vector<double> best_w;

  for (int r = 0; r < opts.restarts; ++r) {
    Rng rng = trial_rng(opts.seed, static_cast<std::uint64_t>(r), 0xb1c0);
    std::vector<double> start(n, 0.0);
    if (r == 0) {
      // Finite-difference gradient of rho at X: a subgradient is where the
      // sup is attained when rho is smooth there.
      const double h = 1e-6 * xscale;
      for (std::size_t i = 0; i < n; ++i) {
        Position up = x;
        Position dn = x;
        up[i] += h;
        dn[i] -= h;
        const double g = (rho(up) - rho(dn)) / (2.0 * h);
        start[i] = std::isfinite(g) ? g : 0.0;
      }
    } else {
      for (auto& v : start) v = uniform(rng, -2.0, 0.0);
    }
    std::vector<double> w = project(start, dom);
    const double s0 = std::pow(10.0, static_cast<double>(r % 8) - 2.0) / xscale;
    Position arg = Position::zeros(n);
    double val = objective(w, &arg);
    double run_best = val;
    std::vector<double> run_w = w;
    for (int k = 1; k <= iters; ++k) {
      std::vector<double> v = w;
      for (std::size_t i = 0; i < n; ++i) v[i] += s0 / k * (x[i] - arg[i]);
      std::vector<double> next = project(v, dom);
      double moved = 0.0;
      for (std::size_t i = 0; i < n; ++i) moved = std::max(moved, std::abs(next[i] - w[i]));
      w = std::move(next);
      val = objective(w, &arg);
      if (val > run_best) {
        run_best = val;
        run_w = w;
      }
      if (moved == 0.0) break;
    }
    if (run_best > rep.dual) {
      rep.dual = run_best;
      best_w = run_w;
      rep.restart = r;
    }
  }
  rep.witness_density = best_w;
  rep.gap = std::isfinite(rep.primal) && std::isfinite(rep.dual) ? std::abs(rep.primal - rep.dual) : kInf;
  return rep;
}

void to_json(nlohmann::json& j, const DualReport& r) {
  j = nlohmann::json{{"primal", number_json(r.primal)},
                     {"dual", number_json(r.dual)},
                     {"gap", number_json(r.gap)},
                     {"witness_density", r.witness_density}};
}

SupportingFunctional support_functional(const SolidSet& c) {
  const std::size_t n = c.dimension();
  if (!c.claims_radially_bounded()) throw NotRadiallyBounded();
  if (c.kind() == SolidSet::Kind::sublevel) {
    Rng rng = trial_rng(0x5a11, 0, 0);
    for (std::size_t t = 0; t < n + 32; ++t) {
      Position d = Position::zeros(n);
      if (t < n) d[t] = 1.0;
      else
        for (std::size_t i = 0; i < n; ++i) d[i] = uniform(rng, 0.0, 1.0);
      if (c.gauge(d) <= 1e-9) throw NotRadiallyBounded();
    }
  }
  std::vector<double> u(n, 1.0 / static_cast<double>(n));
  const auto s = c.support(u);
  if (std::isinf(s.value)) throw NotRadiallyBounded();
  SupportingFunctional out;
  if (s.value <= 0.0) {
    out.z.density = u;
    out.sup = 0.0;
    return out;
  }
  out.z.density.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.z.density[i] = u[i] / s.value;
  out.sup = c.support(out.z.density).value;
  return out;
}

std::string to_string(PolarStatus s) {
  switch (s) {
    case PolarStatus::member: return "member";
    case PolarStatus::not_member: return "not member";
    case PolarStatus::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

PolarStatus polar_membership(const SolidSet& c, const ScenarioSpace& space, const std::vector<double>& z,
                             std::size_t prior) {
  if (c.dimension() != space.size()) throw InputError("solid set dimension does not match the scenario space");
  if (z.size() != space.size()) throw InputError("density length does not match the scenario space");
  for (double v : z)
    if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("polar membership needs a finite nonnegative density");
  const auto y = against_prior(space, prior, z).density;
  if (std::all_of(y.begin(), y.end(), [](double v) { return v == 0.0; })) return PolarStatus::member;
  const auto s = c.support(y);
  if (s.value > 1.0 + 1e-10) return PolarStatus::not_member;
  return s.converged ? PolarStatus::member : PolarStatus::inconclusive;
}

std::vector<double> polar_positive_witness(const SolidSet& c, const ScenarioSpace& space, std::size_t prior) {
  if (c.dimension() != space.size()) throw InputError("solid set dimension does not match the scenario space");
  if (prior >= space.prior_count()) throw InputError("unknown prior index");
  const auto sf = support_functional(c);
  auto p = space.weights(prior);
  std::vector<double> z(space.size(), 1.0);
  for (std::size_t i = 0; i < z.size(); ++i)
    if (p[i] > 0.0) z[i] = sf.z.density[i] / p[i];
  return z;
}

namespace {

BipolarReport bipolar_on(const SolidSet& c, const ScenarioSpace& space, const Position& x,
                         const std::vector<std::size_t>& coords) {
  if (c.dimension() != space.size()) throw InputError("solid set dimension does not match the scenario space");
  space.check(x);
  for (double v : x)
    if (v < 0.0) throw InputError("bipolar check needs a nonnegative position");
  const SolidSet cr = coords.size() == space.size() ? c : c.restrict(coords);
  Position xr = Position::zeros(coords.size());
  for (std::size_t k = 0; k < coords.size(); ++k) xr[k] = x[coords[k]];

  BipolarReport r;
  r.gauge = cr.gauge(xr);
  r.polar_sup = cr.polar_sup(xr);
  r.member = cr.contains(xr);
  if (cr.kind() == SolidSet::Kind::sublevel) r.flags.emplace_back("gauge-only");
  const bool boundary = std::abs(r.gauge - 1.0) <= 1e-9;
  if (boundary) r.flags.emplace_back("boundary");
  bool ok = boundary || r.member == (r.gauge <= 1.0);
  const bool both_inf = std::isinf(r.gauge) && std::isinf(r.polar_sup);
  if (!both_inf && !(std::abs(r.gauge - r.polar_sup) <= 1e-9 * std::max(1.0, r.gauge))) {
    r.flags.emplace_back("gauge-polar-mismatch");
    ok = false;
  }
  r.agree = ok;
  return r;
}

// Maximizer of <y, X> over the polar of a box or polytope.
std::optional<std::vector<double>> polar_argmax(const SolidSet& c, const Position& x) {
  if (c.kind() == SolidSet::Kind::polytope) {
    const auto res = lp::maximize(c.vertices(), std::vector<double>(c.vertices().size(), 1.0), x.vector());
    if (res.status != lp::Status::optimal) return std::nullopt;
    return res.x;
  }
  if (c.kind() == SolidSet::Kind::box) {
    std::vector<double> y(c.dimension(), 0.0);
    double best = 0.0;
    std::size_t arg = c.dimension();
    for (std::size_t i = 0; i < c.dimension(); ++i) {
      const double u = c.upper()[i];
      if (x[i] == 0.0 || std::isinf(u)) continue;
      if (u == 0.0) return std::nullopt;
      if (x[i] / u > best) {
        best = x[i] / u;
        arg = i;
      }
    }
    if (arg < c.dimension()) y[arg] = 1.0 / c.upper()[arg];
    return y;
  }
  return std::nullopt;
}

}  // namespace

BipolarReport bipolar_check(const SolidSet& c, const ScenarioSpace& space, const Position& x, std::size_t prior) {
  return bipolar_on(c, space, x, space.prior_support(prior).indices());
}

BipolarReport robust_bipolar_check(const SolidSet& c, const ScenarioSpace& space, const Position& x) {
  const auto coords = space.support().indices();
  auto r = bipolar_on(c, space, x, coords);
  if (!std::isfinite(r.polar_sup) || c.kind() == SolidSet::Kind::sublevel) return r;
  const SolidSet cr = coords.size() == space.size() ? c : c.restrict(coords);
  Position xr = Position::zeros(coords.size());
  for (std::size_t k = 0; k < coords.size(); ++k) xr[k] = x[coords[k]];
  const auto y = polar_argmax(cr, xr);
  if (!y) return r;
  std::vector<double> masses(space.size(), 0.0);
  for (std::size_t k = 0; k < coords.size(); ++k) masses[coords[k]] = (*y)[k];
  DualMeasure mu = from_point_masses(space, masses);
  const double paired = pair(space, x, mu);
  if (!(std::abs(paired - r.polar_sup) <= 1e-9 * std::max(1.0, r.polar_sup))) {
    r.flags.emplace_back("witness-pairing-mismatch");
    r.agree = false;
  }
  r.witness = std::move(mu);
  return r;
}

void to_json(nlohmann::json& j, const BipolarReport& r) {
  j = nlohmann::json{{"gauge", number_json(r.gauge)},
                     {"polar_sup", number_json(r.polar_sup)},
                     {"member", r.member},
                     {"agree", r.agree}};
  if (!r.flags.empty()) j["flags"] = r.flags;
}

}  // namespace surplus
