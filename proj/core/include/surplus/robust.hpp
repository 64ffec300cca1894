#pragma once

#include <cstddef>
#include <vector>

#include "surplus/scenario.hpp"

namespace surplus {

/// c(E) = max over priors of P(E).
double capacity(const ScenarioSpace& space, const EventMask& e);

/// True iff every prior assigns zero mass to E.
bool is_c_null(const ScenarioSpace& space, const EventMask& e);

/// sup over priors of the L^p(P) norm. Pass p = +infinity for the
/// quasi-sure essential supremum. Throws InputError for p < 1.
double robust_norm(const ScenarioSpace& space, const Position& x, double p);

/// One generator mu_{P,Z}(E) = E_P[1_E Z], scaled by `coeff`.
struct DualTerm {
  std::size_t prior = 0;
  std::vector<double> density;
  double coeff = 1.0;
};

/// Element of the span of the measures mu_{P,Z}, kept in term form.
class DualMeasure {
public:
  DualMeasure() = default;
  explicit DualMeasure(std::vector<DualTerm> terms) : terms_(std::move(terms)) {}

  const std::vector<DualTerm>& terms() const noexcept { return terms_; }
  void add(DualTerm t) { terms_.push_back(std::move(t)); }

  DualMeasure operator+(const DualMeasure& o) const;
  DualMeasure operator*(double s) const;

private:
  std::vector<DualTerm> terms_;
};

/// Validates prior indices, density lengths and finiteness.
void check(const ScenarioSpace& space, const DualMeasure& mu);

/// <X, mu> = sum over terms of coeff * E_P[X Z].
double pair(const ScenarioSpace& space, const Position& x, const DualMeasure& mu);

/// mu(E).
double measure_of(const ScenarioSpace& space, const EventMask& e, const DualMeasure& mu);

/// Reduces the term list to one signed point mass per scenario,
/// m_i = sum of coeff * P(i) * Z_i. Off-support entries are zero. This is a
/// representative choice: different term lists with equal action on
/// positions reduce to the same vector.
std::vector<double> canonical_density(const ScenarioSpace& space, const DualMeasure& mu);

/// Rebuilds a term-form measure from per-scenario masses supported on the
/// quasi-sure support, attributing each scenario to the first prior that
/// charges it.
DualMeasure from_point_masses(const ScenarioSpace& space, const std::vector<double>& masses);

/// True iff all coefficients and densities are nonnegative.
bool is_positive(const DualMeasure& mu);

/// On a finite space the bounded quasi-sure classes are the dual of the
/// measures vanishing on c-null sets, so the standing duality assumption
/// of the robust framework always holds. Kept as an explicit check so
/// callers can record it.
constexpr bool bounded_dual_identification_holds(const ScenarioSpace&) noexcept { return true; }

}  // namespace surplus
