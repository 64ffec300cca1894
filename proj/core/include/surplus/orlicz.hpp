#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "surplus/scenario.hpp"

namespace surplus {

/// Convex, increasing, left-continuous Phi : [0, inf) -> [0, inf] with
/// Phi(0) = 0. Every constructor probes these properties on a grid and
/// throws InputError when they fail.
class OrliczFunction {
public:
  enum class Kind { power, scaled_power, linfty, exp_minus_one, piecewise_linear, custom };

  /// x^p, p >= 1.
  static OrliczFunction power(double p);
  /// c x^p, p >= 1, c > 0.
  static OrliczFunction scaled_power(double p, double c);
  /// 0 on [0, 1], +inf beyond. Generates L^inf.
  static OrliczFunction linfty();
  /// e^x - 1.
  static OrliczFunction exp_minus_one();
  /// Slopes nondecreasing and nonnegative, knots[0] = 0.
  static OrliczFunction piecewise_linear(std::vector<double> knots, std::vector<double> slopes);
  static OrliczFunction custom(std::function<double(double)> phi, std::string name = "custom");

  double operator()(double x) const;

  Kind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return p_; }
  double scale() const noexcept { return c_; }
  bool finite_valued() const noexcept { return kind_ != Kind::linfty && kind_ != Kind::custom; }
  nlohmann::json spec() const;

private:
  void verify() const;

  Kind kind_ = Kind::power;
  double p_ = 1.0;
  double c_ = 1.0;
  std::vector<double> knots_;
  std::vector<double> slopes_;
  std::function<double(double)> fn_;
  std::string name_;
};

/// E_P[Phi(|X| / lambda)], +inf allowed.
double orlicz_modular(const ScenarioSpace& space, const Position& x, const OrliczFunction& phi, double lambda,
                      std::size_t prior);

/// inf{lambda > 0 : E_P[Phi(|X|/lambda)] <= 1} by bisection, started at
/// max|X| + 1 and stopped at width 1e-10 max(1, lambda). The L^inf-type
/// function is answered exactly by the P-essential supremum.
double luxemburg_norm(const ScenarioSpace& space, const Position& x, const OrliczFunction& phi, std::size_t prior);

/// Phi*(y) = sup{x y - Phi(x) : x >= 0}. Closed forms for built-ins;
/// custom functions use golden-section search on growing intervals and
/// report +inf if the maximum keeps growing up to x = 1e9.
double conjugate(const OrliczFunction& phi, double y);

struct HeartMembership {
  bool member = false;
  /// Decided by probing finitely many lambda values (custom Phi only).
  bool probe_only = false;
};

/// E_P[Phi(|X|/lambda)] < inf for every lambda > 0.
HeartMembership in_heart(const ScenarioSpace& space, const Position& x, const OrliczFunction& phi,
                         std::size_t prior);

struct Delta2Report {
  double max_ratio = 0.0;
  double k = 0.0;
  bool plausible = false;
  std::optional<double> first_failure;
};

/// sup of Phi(2x)/Phi(x) over a log grid on [x0, x_max]; 0/0 counts as 1.
Delta2Report delta2_probe(const OrliczFunction& phi, double x0 = 1e-3, double x_max = 1e3, double k = 64.0);

void to_json(nlohmann::json& j, const Delta2Report& r);

}  // namespace surplus
