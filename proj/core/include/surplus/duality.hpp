#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "surplus/risk.hpp"
#include "surplus/robust.hpp"
#include "surplus/scenario.hpp"
#include "surplus/solid.hpp"

namespace surplus {

/// Linear functional phi(X) = sum_i density_i X_i on the scenario space.
/// A density Z against a prior P corresponds to density_i = P_i Z_i.
struct DualElement {
  std::vector<double> density;
};

double apply(const DualElement& phi, const Position& x);
/// The element X -> E_P[Z X].
DualElement against_prior(const ScenarioSpace& space, std::size_t prior, const std::vector<double>& z);

struct ConjugateOptions {
  double l_max = 1e6;
  /// Relative growth across a doubling of L below which the sup stalls.
  double stall = 1e-9;
  std::uint64_t seed = 0;
};

struct ConjugateValue {
  double value = 0.0;
  /// Where the sup was (approximately) attained, if finite.
  std::optional<Position> argmax;
  bool closed_form = false;
};

/// rho*(phi) = sup_X (phi(X) - rho(X)). Closed forms for the built-in
/// expectation, max-loss, worst-loss, ES and convex shortfall; numeric
/// ascent on growing boxes otherwise. Only entries on the quasi-sure
/// support matter. Throws ClaimError unless rho claims convex and
/// monotone.
ConjugateValue conjugate_detail(const RiskFunctional& rho, const DualElement& phi, ConjugateOptions opts = {});
double conjugate_rho(const RiskFunctional& rho, const DualElement& phi, ConjugateOptions opts = {});

enum class DualDomain { negative, negative_with_s };

struct BiconjugateOptions {
  std::uint64_t seed = 0;
  int restarts = 16;
  /// Iterations per restart; numeric conjugates use `numeric_iterations`.
  int iterations = 4000;
  int numeric_iterations = 6;
};

struct DualReport {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  std::vector<double> witness_density;
  /// Index of the restart that produced the witness.
  int restart = 0;
};

/// sup{phi(X) - rho*(phi) : phi <= 0 [, phi(S) = -1]} by projected
/// gradient ascent with diminishing 1/k steps and fixed restarts. The
/// negative_with_s domain needs a payoff S on rho; the negative domain
/// is meant for surplus-invariant rho. Throws ClaimError when the claims
/// do not support the requested domain.
DualReport biconjugate(const RiskFunctional& rho, const Position& x, DualDomain domain, BiconjugateOptions opts = {});

void to_json(nlohmann::json& j, const DualReport& r);

struct SupportingFunctional {
  DualElement z;
  /// Certified sup over C of <z, X>; 1 unless C = {0}.
  double sup = 0.0;
};

/// Strictly positive z with finite sup over C, normalized to sup 1.
/// Throws NotRadiallyBounded when a ray escapes up to t = 1e9.
SupportingFunctional support_functional(const SolidSet& c);

enum class PolarStatus { member, not_member, inconclusive };
std::string to_string(PolarStatus s);

/// Z in C° under prior k: sup over C of E_P[Z X] <= 1 + 1e-10.
PolarStatus polar_membership(const SolidSet& c, const ScenarioSpace& space, const std::vector<double>& z,
                             std::size_t prior);
/// A strictly positive element of C°.
std::vector<double> polar_positive_witness(const SolidSet& c, const ScenarioSpace& space, std::size_t prior);

struct BipolarReport {
  double gauge = 0.0;
  double polar_sup = 0.0;
  bool member = false;
  bool agree = false;
  std::vector<std::string> flags;
  /// Robust variant: the maximizing positive measure, if any.
  std::optional<DualMeasure> witness;
};

/// Checks X in C iff sup over C° of E_P[Z X] <= 1, with the sup computed
/// both by ray shooting and on the polar side. Coordinates outside the
/// support of the prior are irrelevant and dropped.
BipolarReport bipolar_check(const SolidSet& c, const ScenarioSpace& space, const Position& x, std::size_t prior);
/// The same over positive measures in the span of the priors.
BipolarReport robust_bipolar_check(const SolidSet& c, const ScenarioSpace& space, const Position& x);

/// Without the witness measure, whose JSON form needs prior names.
void to_json(nlohmann::json& j, const BipolarReport& r);

}  // namespace surplus
