#include "surplus/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "surplus/error.hpp"

namespace surplus {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Maximizes a concave function on [lo, hi].
std::pair<double, double> golden_max(const std::function<double(double)>& f, double lo, double hi) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
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
  double best_x = fc >= fd ? c : d;
  double best = std::max(fc, fd);
  for (double x : {lo, hi}) {
    const double v = f(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  return {best_x, best};
}

}  // namespace

OrliczFunction OrliczFunction::power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InputError("Orlicz power needs finite p >= 1");
  OrliczFunction f;
  f.kind_ = Kind::power;
  f.p_ = p;
  f.name_ = "power";
  f.verify();
  return f;
}

OrliczFunction OrliczFunction::scaled_power(double p, double c) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InputError("Orlicz power needs finite p >= 1");
  if (!(c > 0.0) || !std::isfinite(c)) throw InputError("Orlicz scale must be positive");
  OrliczFunction f;
  f.kind_ = Kind::scaled_power;
  f.p_ = p;
  f.c_ = c;
  f.name_ = "scaled_power";
  f.verify();
  return f;
}

OrliczFunction OrliczFunction::linfty() {
  OrliczFunction f;
  f.kind_ = Kind::linfty;
  f.name_ = "linfty";
  return f;
}

OrliczFunction OrliczFunction::exp_minus_one() {
  OrliczFunction f;
  f.kind_ = Kind::exp_minus_one;
  f.name_ = "exp_minus_one";
  return f;
}

OrliczFunction OrliczFunction::piecewise_linear(std::vector<double> knots, std::vector<double> slopes) {
  if (knots.empty() || knots.size() != slopes.size()) throw InputError("piecewise-linear Orlicz function needs one slope per knot");
  if (knots.front() != 0.0) throw InputError("piecewise-linear Orlicz function must start at knot 0");
  for (std::size_t k = 0; k < knots.size(); ++k) {
    if (!std::isfinite(knots[k]) || !std::isfinite(slopes[k]) || slopes[k] < 0.0)
      throw InputError("piecewise-linear Orlicz function needs finite knots and nonnegative slopes");
    if (k > 0 && (!(knots[k] > knots[k - 1]) || slopes[k] < slopes[k - 1]))
      throw InputError("piecewise-linear Orlicz function must be convex (increasing knots and slopes)");
  }
  OrliczFunction f;
  f.kind_ = Kind::piecewise_linear;
  f.knots_ = std::move(knots);
  f.slopes_ = std::move(slopes);
  f.name_ = "piecewise_linear";
  f.verify();
  return f;
}

OrliczFunction OrliczFunction::custom(std::function<double(double)> phi, std::string name) {
  if (!phi) throw InputError("custom Orlicz function '" + name + "' has no evaluator");
  OrliczFunction f;
  f.kind_ = Kind::custom;
  f.fn_ = std::move(phi);
  f.name_ = std::move(name);
  f.verify();
  return f;
}

double OrliczFunction::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::power:
      return p_ == 2.0 ? x * x : std::pow(x, p_);
    case Kind::scaled_power:
      return c_ * std::pow(x, p_);
    case Kind::linfty:
      // Left-continuous at the jump: Phi(1) = 0.
      return x <= 1.0 ? 0.0 : kInf;
    case Kind::exp_minus_one:
      return std::expm1(x);
    case Kind::piecewise_linear: {
      double v = 0.0;
      for (std::size_t k = 0; k < knots_.size(); ++k) {
        if (x <= knots_[k]) break;
        const double right = k + 1 < knots_.size() ? knots_[k + 1] : kInf;
        v += slopes_[k] * (std::min(x, right) - knots_[k]);
      }
      return v;
    }
    case Kind::custom:
      return fn_(x);
  }
  return 0.0;
}

void OrliczFunction::verify() const {
  const double at0 = kind_ == Kind::custom ? fn_(0.0) : (*this)(0.0);
  if (at0 != 0.0) throw InputError("Orlicz function must vanish at 0");
  std::vector<double> grid;
  for (int k = -30; k <= 30; ++k) grid.push_back(std::pow(2.0, 0.5 * k));
  double prev = 0.0;
  for (double x : grid) {
    const double v = (*this)(x);
    if (std::isnan(v) || v < 0.0) throw InputError("Orlicz function must take values in [0, inf]");
    if (v < prev) throw InputError("Orlicz function must be increasing");
    prev = v;
  }
  for (std::size_t k = 0; k + 2 < grid.size(); ++k) {
    const double a = grid[k];
    const double b = grid[k + 2];
    const double fa = (*this)(a);
    const double fb = (*this)(b);
    if (std::isinf(fa) || std::isinf(fb)) continue;
    const double fm = (*this)(0.5 * (a + b));
    if (fm > 0.5 * (fa + fb) * (1.0 + 1e-9) + 1e-300) throw InputError("Orlicz function must be convex");
  }
}

nlohmann::json OrliczFunction::spec() const {
  switch (kind_) {
    case Kind::power: return {{"kind", "power"}, {"p", p_}};
    case Kind::scaled_power: return {{"kind", "scaled_power"}, {"p", p_}, {"c", c_}};
    case Kind::linfty: return {{"kind", "linfty_type"}};
    case Kind::exp_minus_one: return {{"kind", "exp_minus_one"}};
    case Kind::piecewise_linear: return {{"kind", "piecewise_linear"}, {"knots", knots_}, {"slopes", slopes_}};
    case Kind::custom: return {{"kind", "custom"}, {"name", name_}};
  }
  return {};
}

double orlicz_modular(const ScenarioSpace& space, const Position& x, const OrliczFunction& phi, double lambda,
                      std::size_t prior) {
  space.check(x);
  if (prior >= space.prior_count()) throw InputError("unknown prior index");
  auto w = space.weights(prior);
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (w[i] == 0.0 || x[i] == 0.0) continue;
    const double v = phi(std::abs(x[i]) / lambda);
    if (std::isinf(v)) return kInf;
    total += w[i] * v;
  }
  return total;
}

double luxemburg_norm(const ScenarioSpace& space, const Position& x, const OrliczFunction& phi, std::size_t prior) {
  space.check(x);
  if (prior >= space.prior_count()) throw InputError("unknown prior index");
  auto w = space.weights(prior);
  double top = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (w[i] > 0.0) top = std::max(top, std::abs(x[i]));
  if (top == 0.0) return 0.0;
  if (phi.kind() == OrliczFunction::Kind::linfty) return top;

  auto g = [&](double lambda) { return orlicz_modular(space, x, phi, lambda, prior); };
  // Invariant: g(lo) > 1 >= g(hi).
  double lo;
  double hi;
  const double start = top + 1.0;
  if (g(start) <= 1.0) {
    hi = start;
    lo = 0.5 * start;
    while (g(lo) <= 1.0) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-300) return hi;
    }
  } else {
    lo = start;
    hi = 2.0 * start;
    while (g(hi) > 1.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) return kInf;
    }
  }
  for (int it = 0; it < 400 && hi - lo > 1e-10 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) <= 1.0) hi = mid;
    else lo = mid;
  }
  return hi;
}

double conjugate(const OrliczFunction& phi, double y) {
  if (!(y >= 0.0)) throw InputError("Orlicz conjugate needs y >= 0");
  if (y == 0.0) return 0.0;
  switch (phi.kind()) {
    case OrliczFunction::Kind::power:
    case OrliczFunction::Kind::scaled_power: {
      const double p = phi.exponent();
      const double c = phi.scale();
      if (p == 1.0) return y <= c ? 0.0 : kInf;
      return (p - 1.0) * c * std::pow(y / (c * p), p / (p - 1.0));
    }
    case OrliczFunction::Kind::linfty:
      return y;
    case OrliczFunction::Kind::exp_minus_one:
      return y <= 1.0 ? 0.0 : y * std::log(y) - y + 1.0;
    case OrliczFunction::Kind::piecewise_linear: {
      const auto spec = phi.spec();
      const auto knots = spec["knots"].get<std::vector<double>>();
      const auto slopes = spec["slopes"].get<std::vector<double>>();
      if (y > slopes.back()) return kInf;
      double best = 0.0;
      for (double x : knots) best = std::max(best, x * y - phi(x));
      return best;
    }
    case OrliczFunction::Kind::custom:
      break;
  }
  auto h = [&](double x) {
    const double v = phi(x);
    return std::isinf(v) ? -kInf : x * y - v;
  };
  double cap = 1.0;
  double best = golden_max(h, 0.0, cap).second;
  while (cap < 1e9) {
    cap *= 2.0;
    const double next = golden_max(h, 0.0, cap).second;
    const bool stalled = next - best < 1e-12 * std::max(1.0, std::abs(next));
    best = std::max(best, next);
    if (stalled) return std::max(best, 0.0);
  }
  return kInf;
}

HeartMembership in_heart(const ScenarioSpace& space, const Position& x, const OrliczFunction& phi,
                         std::size_t prior) {
  space.check(x);
  if (prior >= space.prior_count()) throw InputError("unknown prior index");
  auto w = space.weights(prior);
  if (phi.finite_valued()) return {true, false};
  if (phi.kind() == OrliczFunction::Kind::linfty) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (w[i] > 0.0 && x[i] != 0.0) return {false, false};
    return {true, false};
  }
  for (int k = -12; k <= 12; ++k) {
    const double lambda = std::pow(10.0, 0.5 * k);
    if (std::isinf(orlicz_modular(space, x, phi, lambda, prior))) return {false, true};
  }
  return {true, true};
}

Delta2Report delta2_probe(const OrliczFunction& phi, double x0, double x_max, double k) {
  if (!(x0 > 0.0) || !(x_max > x0)) throw InputError("delta2 probe needs 0 < x0 < x_max");
  Delta2Report r;
  r.k = k;
  const int points = 400;
  const double step = std::log(x_max / x0) / (points - 1);
  for (int i = 0; i < points; ++i) {
    const double x = x0 * std::exp(step * i);
    const double a = phi(x);
    const double b = phi(2.0 * x);
    double ratio;
    if (std::isinf(b)) ratio = kInf;
    else if (a == 0.0) ratio = b == 0.0 ? 1.0 : kInf;
    else ratio = b / a;
    r.max_ratio = std::max(r.max_ratio, ratio);
    if (ratio > k && !r.first_failure) r.first_failure = x;
  }
  r.plausible = r.max_ratio <= k;
  return r;
}

void to_json(nlohmann::json& j, const Delta2Report& r) {
  j = nlohmann::json{{"max_ratio", std::isinf(r.max_ratio) ? nlohmann::json("inf") : nlohmann::json(r.max_ratio)},
                     {"k", r.k},
                     {"verdict", r.plausible ? "delta2 plausible" : "delta2 fails on probe"}};
  if (r.first_failure) j["first_failure"] = *r.first_failure;
}

}  // namespace surplus
