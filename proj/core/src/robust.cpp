#include "surplus/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "surplus/error.hpp"

namespace surplus {

double capacity(const ScenarioSpace& space, const EventMask& e) {
  space.check(e);
  double c = 0.0;
  for (std::size_t k = 0; k < space.prior_count(); ++k) {
    double mass = 0.0;
    auto w = space.weights(k);
    for (std::size_t i = 0; i < w.size(); ++i)
      if (e[i]) mass += w[i];
    c = std::max(c, mass);
  }
  return std::min(c, 1.0);
}

bool is_c_null(const ScenarioSpace& space, const EventMask& e) {
  space.check(e);
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] && space.support()[i]) return false;
  return true;
}

double robust_norm(const ScenarioSpace& space, const Position& x, double p) {
  space.check(x);
  if (!(p >= 1.0)) throw InputError("robust_norm needs p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (space.support()[i]) m = std::max(m, std::abs(x[i]));
    return m;
  }
  double best = 0.0;
  for (std::size_t k = 0; k < space.prior_count(); ++k) {
    auto w = space.weights(k);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (w[i] > 0.0) s += w[i] * std::pow(std::abs(x[i]), p);
    best = std::max(best, std::pow(s, 1.0 / p));
  }
  return best;
}

DualMeasure DualMeasure::operator+(const DualMeasure& o) const {
  DualMeasure out = *this;
  for (const auto& t : o.terms_) out.terms_.push_back(t);
  return out;
}

DualMeasure DualMeasure::operator*(double s) const {
  DualMeasure out = *this;
  for (auto& t : out.terms_) t.coeff *= s;
  return out;
}

void check(const ScenarioSpace& space, const DualMeasure& mu) {
  for (const auto& t : mu.terms()) {
    if (t.prior >= space.prior_count()) throw InputError("dual term references an unknown prior");
    if (t.density.size() != space.size()) throw InputError("dual term density has the wrong length");
    if (!std::isfinite(t.coeff)) throw InputError("dual term coefficient is not finite");
    for (double z : t.density)
      if (!std::isfinite(z)) throw InputError("dual term density is not bounded");
  }
}

double pair(const ScenarioSpace& space, const Position& x, const DualMeasure& mu) {
  space.check(x);
  check(space, mu);
  double total = 0.0;
  for (const auto& t : mu.terms()) {
    auto w = space.weights(t.prior);
    double e = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (w[i] > 0.0) e += w[i] * x[i] * t.density[i];
    total += t.coeff * e;
  }
  return total;
}

double measure_of(const ScenarioSpace& space, const EventMask& e, const DualMeasure& mu) {
  space.check(e);
  std::vector<double> ind(space.size(), 0.0);
  for (std::size_t i = 0; i < ind.size(); ++i) ind[i] = e[i] ? 1.0 : 0.0;
  return pair(space, Position(std::move(ind)), mu);
}

std::vector<double> canonical_density(const ScenarioSpace& space, const DualMeasure& mu) {
  check(space, mu);
  std::vector<double> m(space.size(), 0.0);
  for (const auto& t : mu.terms()) {
    auto w = space.weights(t.prior);
    for (std::size_t i = 0; i < m.size(); ++i)
      if (w[i] > 0.0) m[i] += t.coeff * w[i] * t.density[i];
  }
  return m;
}

DualMeasure from_point_masses(const ScenarioSpace& space, const std::vector<double>& masses) {
  if (masses.size() != space.size()) throw InputError("point masses have the wrong length");
  std::vector<DualTerm> terms;
  for (std::size_t k = 0; k < space.prior_count(); ++k)
    terms.push_back(DualTerm{k, std::vector<double>(space.size(), 0.0), 1.0});
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (masses[i] == 0.0) continue;
    bool placed = false;
    for (std::size_t k = 0; k < space.prior_count() && !placed; ++k) {
      double w = space.weights(k)[i];
      if (w > 0.0) {
        terms[k].density[i] = masses[i] / w;
        placed = true;
      }
    }
    if (!placed) throw InputError("point mass on a c-null scenario");
  }
  std::erase_if(terms, [](const DualTerm& t) {
    return std::all_of(t.density.begin(), t.density.end(), [](double z) { return z == 0.0; });
  });
  return DualMeasure(std::move(terms));
}

bool is_positive(const DualMeasure& mu) {
  for (const auto& t : mu.terms()) {
    if (t.coeff < 0.0 && std::any_of(t.density.begin(), t.density.end(), [](double z) { return z != 0.0; }))
      return false;
    if (t.coeff > 0.0 && std::any_of(t.density.begin(), t.density.end(), [](double z) { return z < 0.0; }))
      return false;
  }
  return true;
}

}  // namespace surplus
