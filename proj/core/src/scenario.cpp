#include "surplus/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "surplus/error.hpp"

namespace surplus {

Position::Position(std::vector<double> payoffs) : payoffs_(std::move(payoffs)) {}

Position::Position(std::initializer_list<double> payoffs) : payoffs_(payoffs) {}

Position Position::unit(std::size_t n, std::size_t i, double scale) {
  Position e = zeros(n);
  e.payoffs_.at(i) = scale;
  return e;
}

Position& Position::operator+=(const Position& other) {
  if (other.size() != size()) throw InputError("position length mismatch");
  for (std::size_t i = 0; i < size(); ++i) payoffs_[i] += other.payoffs_[i];
  return *this;
}

Position& Position::operator-=(const Position& other) {
  if (other.size() != size()) throw InputError("position length mismatch");
  for (std::size_t i = 0; i < size(); ++i) payoffs_[i] -= other.payoffs_[i];
  return *this;
}

Position& Position::operator*=(double s) {
  for (double& v : payoffs_) v *= s;
  return *this;
}

EventMask EventMask::of(std::size_t n, std::initializer_list<std::size_t> indices) {
  return of(n, std::span<const std::size_t>(indices.begin(), indices.size()));
}

EventMask EventMask::of(std::size_t n, std::span<const std::size_t> indices) {
  EventMask e = none(n);
  for (std::size_t i : indices) {
    if (i >= n) throw InputError("event index out of range");
    e.members_[i] = true;
  }
  return e;
}

EventMask EventMask::from_bits(std::size_t n, unsigned long long bits) {
  EventMask e = none(n);
  for (std::size_t i = 0; i < n && i < 64; ++i) e.members_[i] = ((bits >> i) & 1ULL) != 0;
  return e;
}

std::size_t EventMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(members_.begin(), members_.end(), true));
}

std::vector<std::size_t> EventMask::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < members_.size(); ++i)
    if (members_[i]) out.push_back(i);
  return out;
}

EventMask EventMask::complement() const {
  EventMask e = *this;
  e.members_.flip();
  return e;
}

EventMask EventMask::operator&(const EventMask& o) const {
  if (o.size() != size()) throw InputError("event length mismatch");
  EventMask e = none(size());
  for (std::size_t i = 0; i < size(); ++i) e.members_[i] = members_[i] && o.members_[i];
  return e;
}

EventMask EventMask::operator|(const EventMask& o) const {
  if (o.size() != size()) throw InputError("event length mismatch");
  EventMask e = none(size());
  for (std::size_t i = 0; i < size(); ++i) e.members_[i] = members_[i] || o.members_[i];
  return e;
}

EventMask EventMask::operator-(const EventMask& o) const { return *this & o.complement(); }

bool EventMask::subset_of(const EventMask& o) const {
  if (o.size() != size()) throw InputError("event length mismatch");
  for (std::size_t i = 0; i < size(); ++i)
    if (members_[i] && !o.members_[i]) return false;
  return true;
}

ScenarioSpace::ScenarioSpace(std::vector<std::string> labels, std::vector<Prior> priors)
    : labels_(std::move(labels)), priors_(std::move(priors)) {
  if (labels_.empty()) throw InputError("scenario space needs at least one scenario");
  if (priors_.empty()) throw InputError("scenario space needs at least one prior");
  for (std::size_t i = 0; i < labels_.size(); ++i)
    for (std::size_t j = i + 1; j < labels_.size(); ++j)
      if (labels_[i] == labels_[j]) throw InputError("duplicate scenario label '" + labels_[i] + "'");
  support_ = EventMask::none(labels_.size());
  for (const Prior& p : priors_) {
    if (p.weights.size() != labels_.size())
      throw InputError("prior '" + p.name + "' has " + std::to_string(p.weights.size()) +
                       " weights for " + std::to_string(labels_.size()) + " scenarios");
    double total = 0.0;
    for (double w : p.weights) {
      if (!std::isfinite(w) || w < 0.0) throw InputError("prior '" + p.name + "' has a negative or non-finite weight");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InputError("prior '" + p.name + "' does not sum to one");
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (p.weights[i] > 0.0) support_.set(i);
  }
  for (std::size_t a = 0; a < priors_.size(); ++a)
    for (std::size_t b = a + 1; b < priors_.size(); ++b)
      if (priors_[a].name == priors_[b].name) throw InputError("duplicate prior name '" + priors_[a].name + "'");
}

ScenarioSpace ScenarioSpace::uniform(std::size_t n) {
  if (n == 0) throw InputError("scenario space needs at least one scenario");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("w" + std::to_string(i + 1));
  return ScenarioSpace(std::move(labels), {Prior{"P", std::vector<double>(n, 1.0 / static_cast<double>(n))}});
}

std::size_t ScenarioSpace::prior_index(const std::string& name) const {
  for (std::size_t k = 0; k < priors_.size(); ++k)
    if (priors_[k].name == name) return k;
  throw InputError("unknown prior '" + name + "'");
}

std::size_t ScenarioSpace::scenario_index(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  throw InputError("unknown scenario '" + label + "'");
}

EventMask ScenarioSpace::prior_support(std::size_t k) const {
  const auto& w = priors_.at(k).weights;
  EventMask e = EventMask::none(size());
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) e.set(i);
  return e;
}

Position ScenarioSpace::position(std::vector<double> payoffs) const { return canonical(Position(std::move(payoffs))); }

Position ScenarioSpace::canonical(Position x) const {
  check(x);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!support_[i]) x[i] = 0.0;
  return x;
}

void ScenarioSpace::check(const Position& x) const {
  if (x.size() != size())
    throw InputError("position has " + std::to_string(x.size()) + " entries for " + std::to_string(size()) +
                     " scenarios");
  for (double v : x)
    if (!std::isfinite(v)) throw InputError("position has a non-finite payoff");
}

void ScenarioSpace::check(const EventMask& e) const {
  if (e.size() != size()) throw InputError("event length does not match the scenario space");
}

Position pos_part(const Position& x) {
  Position out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
  return out;
}

Position neg_part(const Position& x) {
  Position out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] < 0.0 ? -x[i] : 0.0;
  return out;
}

Position abs(const Position& x) {
  Position out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(x[i]);
  return out;
}

Position min(const Position& x, const Position& y) {
  if (x.size() != y.size()) throw InputError("position length mismatch");
  Position out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(x[i], y[i]);
  return out;
}

Position max(const Position& x, const Position& y) {
  if (x.size() != y.size()) throw InputError("position length mismatch");
  Position out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(x[i], y[i]);
  return out;
}

Position band_project(const Position& x, const EventMask& e) {
  if (x.size() != e.size()) throw InputError("event length does not match the position");
  Position out = x;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!e[i]) out[i] = 0.0;
  return out;
}

bool order_leq(const Position& x, const Position& y, const EventMask& support) {
  if (x.size() != y.size() || x.size() != support.size()) throw InputError("length mismatch in order comparison");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (support[i] && x[i] > y[i]) return false;
  return true;
}

bool is_nonnegative(const Position& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return v >= 0.0; });
}

double max_abs(const Position& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace surplus
