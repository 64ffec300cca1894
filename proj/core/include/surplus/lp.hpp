#pragma once

#include <vector>

namespace surplus::lp {

enum class Status { optimal, unbounded, infeasible };

struct Result {
  Status status = Status::infeasible;
  double value = 0.0;
  std::vector<double> x;
};

/// max c.x subject to A x <= b, x >= 0. Dense two-phase tableau simplex
/// with Bland's rule; intended for the handful of variables that
/// polytope computations here involve.
Result maximize(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                const std::vector<double>& c);

}  // namespace surplus::lp
