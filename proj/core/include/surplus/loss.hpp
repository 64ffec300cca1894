#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace surplus {

/// Increasing loss function with l(0) = 0, applied to shortfalls X^-.
class LossFunction {
public:
  enum class Kind { power, exponential, piecewise_linear, custom };

  /// x^p, p > 0 (convex for p >= 1).
  static LossFunction power(double p);
  /// exp(rate * x) - 1, rate > 0.
  static LossFunction exponential(double rate = 1.0);
  /// Slope slopes[k] on [knots[k], knots[k+1]); knots[0] must be 0 and the
  /// last slope extends to infinity. Slopes must be nonnegative.
  static LossFunction piecewise_linear(std::vector<double> knots, std::vector<double> slopes);
  /// User evaluator. Throws InputError if `f` is empty.
  static LossFunction custom(std::function<double(double)> f, bool convex, std::string name = "custom");

  double operator()(double x) const;

  Kind kind() const noexcept { return kind_; }
  bool convex() const noexcept { return convex_; }
  const std::string& name() const noexcept { return name_; }
  double exponent() const noexcept { return param_; }

  /// lim_{x -> inf} l(x); +inf for every unbounded loss.
  double supremum() const;
  /// sup{t >= 0 : l(t) <= level}; +inf when l never exceeds the level.
  double level_inverse(double level) const;
  /// l*(y) = sup_{x >= 0} (x y - l(x)) for convex built-ins; throws
  /// ClaimError for non-convex or custom losses.
  double conjugate(double y) const;
  /// A maximizer of x y - l(x) (the derivative of l* where it exists);
  /// +inf when the supremum is not attained.
  double conjugate_argmax(double y) const;

  nlohmann::json spec() const;

private:
  Kind kind_ = Kind::power;
  double param_ = 1.0;
  std::vector<double> knots_;
  std::vector<double> slopes_;
  std::function<double(double)> fn_;
  bool convex_ = true;
  std::string name_;
};

}  // namespace surplus
