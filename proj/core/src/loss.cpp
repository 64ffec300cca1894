#include "surplus/loss.hpp"

#include <cmath>
#include <limits>

#include "surplus/error.hpp"

namespace surplus {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

LossFunction LossFunction::power(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw InputError("power loss needs a finite exponent p > 0");
  LossFunction l;
  l.kind_ = Kind::power;
  l.param_ = p;
  l.convex_ = p >= 1.0;
  l.name_ = "power";
  return l;
}

LossFunction LossFunction::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw InputError("exponential loss needs a finite rate > 0");
  LossFunction l;
  l.kind_ = Kind::exponential;
  l.param_ = rate;
  l.convex_ = true;
  l.name_ = "exponential";
  return l;
}

LossFunction LossFunction::piecewise_linear(std::vector<double> knots, std::vector<double> slopes) {
  if (knots.empty() || knots.size() != slopes.size()) throw InputError("piecewise-linear loss needs one slope per knot");
  if (knots.front() != 0.0) throw InputError("piecewise-linear loss must start at knot 0");
  bool convex = true;
  for (std::size_t k = 0; k < knots.size(); ++k) {
    if (!std::isfinite(knots[k]) || !std::isfinite(slopes[k]) || slopes[k] < 0.0)
      throw InputError("piecewise-linear loss needs finite knots and nonnegative slopes");
    if (k > 0 && !(knots[k] > knots[k - 1])) throw InputError("piecewise-linear knots must increase");
    if (k > 0 && slopes[k] < slopes[k - 1]) convex = false;
  }
  LossFunction l;
  l.kind_ = Kind::piecewise_linear;
  l.knots_ = std::move(knots);
  l.slopes_ = std::move(slopes);
  l.convex_ = convex;
  l.name_ = "piecewise_linear";
  return l;
}

LossFunction LossFunction::custom(std::function<double(double)> f, bool convex, std::string name) {
  if (!f) throw InputError("custom loss '" + name + "' has no evaluator");
  LossFunction l;
  l.kind_ = Kind::custom;
  l.fn_ = std::move(f);
  l.convex_ = convex;
  l.name_ = std::move(name);
  return l;
}

double LossFunction::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::power:
      return param_ == 1.0 ? x : (param_ == 2.0 ? x * x : std::pow(x, param_));
    case Kind::exponential:
      return std::expm1(param_ * x);
    case Kind::piecewise_linear: {
      double v = 0.0;
      for (std::size_t k = 0; k < knots_.size(); ++k) {
        const double right = k + 1 < knots_.size() ? knots_[k + 1] : kInf;
        if (x <= knots_[k]) break;
        v += slopes_[k] * (std::min(x, right) - knots_[k]);
      }
      return v;
    }
    case Kind::custom:
      return fn_(x);
  }
  return 0.0;
}

double LossFunction::supremum() const {
  switch (kind_) {
    case Kind::power:
    case Kind::exponential:
      return kInf;
    case Kind::piecewise_linear:
      return slopes_.back() > 0.0 ? kInf : (*this)(knots_.back());
    case Kind::custom:
      return fn_(1e300);
  }
  return kInf;
}

double LossFunction::level_inverse(double level) const {
  if (level < 0.0) return 0.0;
  switch (kind_) {
    case Kind::power:
      return std::pow(level, 1.0 / param_);
    case Kind::exponential:
      return std::log1p(level) / param_;
    case Kind::piecewise_linear: {
      double v = 0.0;
      for (std::size_t k = 0; k < knots_.size(); ++k) {
        const double right = k + 1 < knots_.size() ? knots_[k + 1] : kInf;
        const double seg = std::isinf(right) ? kInf : slopes_[k] * (right - knots_[k]);
        if (v + seg > level) return slopes_[k] > 0.0 ? knots_[k] + (level - v) / slopes_[k] : kInf;
        v += seg;
      }
      return kInf;
    }
    case Kind::custom: {
      if (supremum() <= level) return kInf;
      double hi = 1.0;
      while (fn_(hi) <= level) hi *= 2.0;
      double lo = 0.0;
      for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (fn_(mid) <= level) lo = mid;
        else hi = mid;
      }
      return lo;
    }
  }
  return 0.0;
}

double LossFunction::conjugate(double y) const {
  if (!convex_ || kind_ == Kind::custom) throw ClaimError("conjugate requires a convex built-in loss");
  if (y <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::power: {
      const double p = param_;
      if (p == 1.0) return y <= 1.0 ? 0.0 : kInf;
      return (p - 1.0) * std::pow(y / p, p / (p - 1.0));
    }
    case Kind::exponential: {
      const double r = param_;
      if (y <= r) return 0.0;
      const double u = y / r;
      return u * std::log(u) - u + 1.0;
    }
    case Kind::piecewise_linear: {
      if (y > slopes_.back()) return kInf;
      double best = 0.0;
      for (double x : knots_) best = std::max(best, x * y - (*this)(x));
      return best;
    }
    case Kind::custom:
      break;
  }
  return kInf;
}

double LossFunction::conjugate_argmax(double y) const {
  if (!convex_ || kind_ == Kind::custom) throw ClaimError("conjugate requires a convex built-in loss");
  if (y <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::power: {
      const double p = param_;
      if (p == 1.0) return y < 1.0 ? 0.0 : (y == 1.0 ? 0.0 : kInf);
      return std::pow(y / p, 1.0 / (p - 1.0));
    }
    case Kind::exponential:
      return y <= param_ ? 0.0 : std::log(y / param_) / param_;
    case Kind::piecewise_linear: {
      if (y > slopes_.back()) return kInf;
      double best = 0.0;
      double arg = 0.0;
      for (double x : knots_) {
        const double v = x * y - (*this)(x);
        if (v > best) {
          best = v;
          arg = x;
        }
      }
      return arg;
    }
    case Kind::custom:
      break;
  }
  return kInf;
}

nlohmann::json LossFunction::spec() const {
  switch (kind_) {
    case Kind::power:
      return {{"kind", "power"}, {"p", param_}};
    case Kind::exponential:
      return {{"kind", "exponential"}, {"rate", param_}};
    case Kind::piecewise_linear:
      return {{"kind", "piecewise_linear"}, {"knots", knots_}, {"slopes", slopes_}};
    case Kind::custom:
      return {{"kind", "custom"}, {"name", name_}};
  }
  return {};
}

}  // namespace surplus
