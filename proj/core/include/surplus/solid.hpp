#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "surplus/scenario.hpp"

namespace surplus {

/// Convex solid subset of the positive orthant. Three representations:
/// a box [0, u], the solid hull of the convex hull of finitely many
/// nonnegative vertices (and 0), or a sublevel set {g <= level} of a
/// user-supplied convex gauge.
class SolidSet {
public:
  enum class Kind { box, polytope, sublevel };
  using Gauge = std::function<double(const Position&)>;

  /// Upper bounds in [0, +inf].
  static SolidSet box(std::vector<double> upper);
  static SolidSet polytope(std::vector<std::vector<double>> vertices);
  /// Solidity is sampled on construction. `radially_bounded` is the
  /// caller's claim; it is tested again where it matters.
  static SolidSet sublevel(std::size_t dim, Gauge g, double level, bool radially_bounded, std::string name = "sublevel");

  Kind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dim_; }
  bool claims_radially_bounded() const noexcept { return radially_bounded_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  const std::vector<std::vector<double>>& vertices() const noexcept { return vertices_; }

  /// Negative entries are never members.
  bool contains(const Position& x) const;

  /// inf{t > 0 : X/t in C} for X >= 0, via ray shooting. +inf when no
  /// multiple of X lies in C, 0 when the whole ray does.
  double gauge(const Position& x) const;

  struct Support {
    double value = 0.0;
    /// False when a numeric ascent (sublevel sets) did not settle.
    bool converged = true;
  };
  /// sup over C of sum z_i X_i for z >= 0. Linear programming for
  /// polytopes, closed form for boxes, direction search for sublevels.
  Support support(const std::vector<double>& z) const;

  /// sup{<y, X> : y >= 0, <y, V> <= 1 for all V in C}, computed on the
  /// polar side. Sublevel sets have no independent route and return the
  /// gauge.
  double polar_sup(const Position& x) const;

  /// The same set seen on a subset of coordinates (other coordinates
  /// set to zero). Used to work on the support of a prior.
  SolidSet restrict(const std::vector<std::size_t>& coords) const;

  nlohmann::json spec() const;

private:
  Kind kind_ = Kind::box;
  std::size_t dim_ = 0;
  bool radially_bounded_ = true;
  std::vector<double> upper_;
  std::vector<std::vector<double>> vertices_;
  Gauge gauge_fn_;
  double level_ = 1.0;
  std::string name_;
};

}  // namespace surplus
