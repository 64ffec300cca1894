#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "surplus/report.hpp"

namespace surplus {

/// c r^n with |r| < 1.
struct GeoTerm {
  double c = 0.0;
  double r = 0.0;
};

/// n -> d + a n + sum_k c_k r_k^n.
struct SeqFormula {
  double d = 0.0;
  double a = 0.0;
  std::vector<GeoTerm> geo;

  double at(std::uint64_t n) const;
  bool is_zero() const noexcept;
};

/// Sequence values on the indices [from, to); to == SeqPiece::end means
/// unbounded. `sign` is +1 when the piece is known to be >= 0, -1 when
/// known to be <= 0, 0 when unknown.
struct SeqPiece {
  static constexpr std::uint64_t end = UINT64_MAX;
  std::uint64_t from = 1;
  std::uint64_t to = end;
  SeqFormula f;
  int sign = 0;
};

/// Real sequence indexed by n >= 1, stored as consecutive closed-form
/// pieces. Input positions are an explicit head followed by a constant,
/// affine or geometric tail; lattice operations split pieces where signs
/// change, so the representation stays exact and finite.
class SeqPosition {
public:
  /// The zero sequence.
  SeqPosition();
  explicit SeqPosition(std::vector<SeqPiece> pieces);

  static SeqPosition constant(double c, std::vector<double> head = {});
  /// a n + b beyond the head.
  static SeqPosition affine(double a, double b, std::vector<double> head = {});
  /// c r^n beyond the head, |r| < 1.
  static SeqPosition geometric(double c, double r, std::vector<double> head = {});
  /// The unit U = (1, 1, ...).
  static SeqPosition unit() { return constant(1.0); }

  double operator[](std::uint64_t n) const;
  const std::vector<SeqPiece>& pieces() const noexcept { return pieces_; }
  bool is_zero() const noexcept;

  SeqPosition operator-() const;
  friend SeqPosition operator+(const SeqPosition& x, const SeqPosition& y);
  friend SeqPosition operator-(const SeqPosition& x, const SeqPosition& y);
  friend SeqPosition operator*(double s, const SeqPosition& x);

private:
  std::vector<SeqPiece> pieces_;
};

SeqPosition neg_part(const SeqPosition& x);
SeqPosition pos_part(const SeqPosition& x);
/// sup_n x_n, possibly +inf.
double sup(const SeqPosition& x);
/// -(X^- min level U).
SeqPosition truncate(const SeqPosition& x, double level);
/// sum_n w q^n x_n.
double weighted_sum(const SeqPosition& x, double w, double q);

class SeqFunctional {
public:
  enum class Kind { weighted_shortfall, sup_shortfall };

  /// rho(X) = sum_n w q^n X^-_n, w > 0, 0 < q < 1.
  static SeqFunctional weighted_shortfall(double w, double q);
  /// rho(X) = sup_n X^-_n.
  static SeqFunctional sup_shortfall();

  /// Closed form; on unbounded sequences this is the value of the
  /// truncation limit.
  double operator()(const SeqPosition& x) const;

  Kind kind() const noexcept { return kind_; }
  double weight() const noexcept { return w_; }
  double ratio() const noexcept { return q_; }
  nlohmann::json spec() const;

private:
  Kind kind_ = Kind::sup_shortfall;
  double w_ = 1.0;
  double q_ = 0.5;
};

struct ExtendResult {
  double value = 0.0;
  /// (n, rho(truncate(X, n))) for every evaluated n.
  std::vector<std::pair<double, double>> trace;
  std::optional<double> closed_form;
  bool agrees = true;
  std::vector<std::string> flags;
};

/// lim_n rho(truncate(X, n)) along n = base^k. Returns once successive
/// values differ by less than tol, or +inf once they exceed 1/tol while
/// still growing by at least tol. Throws ContractError if the values
/// decrease.
ExtendResult extend(const SeqFunctional& rho, const SeqPosition& x, double tol, double base = 2.0);

/// inf{m : limit of the truncated shortfall of (X + m U) <= alpha} for a
/// weighted shortfall, by bisection to tol. +inf when no m up to 1e12
/// is acceptable.
double extend_s_additive(const SeqFunctional& rho, double alpha, const SeqPosition& x, double tol);

/// Both truncation schedules (2^k and 3^k) and the closed form must agree
/// within 2 tol on every listed position.
LawReport uniqueness_check(const SeqFunctional& rho, const std::vector<SeqPosition>& xs, double tol);

void to_json(nlohmann::json& j, const SeqPosition& x);
void to_json(nlohmann::json& j, const ExtendResult& r);

}  // namespace surplus
