#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace surplus {

/// Payoff vector over the scenarios of a ScenarioSpace. Entries are
/// currency amounts at the horizon. Positions carry no reference to their
/// space; operations check lengths.
class Position {
public:
  Position() = default;
  explicit Position(std::vector<double> payoffs);
  Position(std::initializer_list<double> payoffs);

  static Position zeros(std::size_t n) { return Position(std::vector<double>(n, 0.0)); }
  static Position constant(std::size_t n, double c) { return Position(std::vector<double>(n, c)); }
  static Position unit(std::size_t n, std::size_t i, double scale = 1.0);

  std::size_t size() const noexcept { return payoffs_.size(); }
  double operator[](std::size_t i) const { return payoffs_[i]; }
  double& operator[](std::size_t i) { return payoffs_[i]; }
  std::span<const double> values() const noexcept { return payoffs_; }
  const std::vector<double>& vector() const noexcept { return payoffs_; }

  auto begin() const noexcept { return payoffs_.begin(); }
  auto end() const noexcept { return payoffs_.end(); }

  Position& operator+=(const Position& other);
  Position& operator-=(const Position& other);
  Position& operator*=(double s);

  friend Position operator+(Position a, const Position& b) { return a += b; }
  friend Position operator-(Position a, const Position& b) { return a -= b; }
  friend Position operator*(Position a, double s) { return a *= s; }
  friend Position operator*(double s, Position a) { return a *= s; }
  friend Position operator-(Position a) { return a *= -1.0; }
  friend bool operator==(const Position&, const Position&) = default;

private:
  std::vector<double> payoffs_;
};

/// Subset of scenarios. At finite scale every band of the payoff lattice is
/// the set of positions supported on such an event.
class EventMask {
public:
  EventMask() = default;
  explicit EventMask(std::vector<bool> members) : members_(std::move(members)) {}

  static EventMask none(std::size_t n) { return EventMask(std::vector<bool>(n, false)); }
  static EventMask all(std::size_t n) { return EventMask(std::vector<bool>(n, true)); }
  static EventMask of(std::size_t n, std::initializer_list<std::size_t> indices);
  static EventMask of(std::size_t n, std::span<const std::size_t> indices);
  /// Event whose members are the set bits of `bits` (scenario i <-> bit i).
  static EventMask from_bits(std::size_t n, unsigned long long bits);

  std::size_t size() const noexcept { return members_.size(); }
  bool contains(std::size_t i) const { return members_[i]; }
  bool operator[](std::size_t i) const { return members_[i]; }
  void set(std::size_t i, bool v = true) { members_[i] = v; }
  std::size_t count() const noexcept;
  bool empty() const noexcept { return count() == 0; }
  std::vector<std::size_t> indices() const;

  EventMask complement() const;
  EventMask operator&(const EventMask& o) const;
  EventMask operator|(const EventMask& o) const;
  /// Set difference this \ o.
  EventMask operator-(const EventMask& o) const;
  bool subset_of(const EventMask& o) const;
  friend bool operator==(const EventMask&, const EventMask&) = default;

private:
  std::vector<bool> members_;
};

struct Prior {
  std::string name;
  std::vector<double> weights;
};

/// Finite outcome set together with a nonempty family of probability
/// priors. Scenarios are addressed by index; labels are metadata.
class ScenarioSpace {
public:
  /// Throws InputError unless every prior has one nonnegative weight per
  /// label and sums to one within 1e-12.
  ScenarioSpace(std::vector<std::string> labels, std::vector<Prior> priors);

  /// Space with `n` scenarios named w1..wn and one uniform prior "P".
  static ScenarioSpace uniform(std::size_t n);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t prior_count() const noexcept { return priors_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<Prior>& priors() const noexcept { return priors_; }
  const Prior& prior(std::size_t k) const { return priors_.at(k); }
  std::span<const double> weights(std::size_t k) const { return priors_.at(k).weights; }

  /// Index of the prior with the given name; throws InputError if absent.
  std::size_t prior_index(const std::string& name) const;
  /// Index of the scenario with the given label; throws InputError if absent.
  std::size_t scenario_index(const std::string& label) const;

  /// Scenarios charged by prior k.
  EventMask prior_support(std::size_t k) const;
  /// Union of the supports of all priors (the quasi-sure support).
  const EventMask& support() const noexcept { return support_; }

  /// Validates length and finiteness, then zeroes entries off the
  /// quasi-sure support so that equal classes have equal representatives.
  Position position(std::vector<double> payoffs) const;
  /// Same normalization applied to an existing vector.
  Position canonical(Position x) const;

  void check(const Position& x) const;
  void check(const EventMask& e) const;

private:
  std::vector<std::string> labels_;
  std::vector<Prior> priors_;
  EventMask support_;
};

Position pos_part(const Position& x);
Position neg_part(const Position& x);
Position abs(const Position& x);
Position min(const Position& x, const Position& y);
Position max(const Position& x, const Position& y);

/// 1_E X: equals X on E and zero off E.
Position band_project(const Position& x, const EventMask& e);

/// Quasi-sure order: X <= Y on every scenario of `support`. Exact, no
/// tolerance.
bool order_leq(const Position& x, const Position& y, const EventMask& support);

bool is_nonnegative(const Position& x);
double max_abs(const Position& x);

}  // namespace surplus
