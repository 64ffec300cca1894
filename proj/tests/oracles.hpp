// Independent reference computations used by the tests. Nothing here calls
// into the library; each oracle takes a different route to the same number.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// P(X + m < 0) by direct summation.
inline double mass_below(const std::vector<double>& x, const std::vector<double>& w, double m) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] + m < 0.0) s += w[i];
  return s;
}

/// inf{m : P(X + m < 0) <= alpha}. The map m -> P(X + m < 0) is a right
/// continuous step function with jumps at m = -x_i, so the infimum is one
/// of those points.
inline double var(const std::vector<double>& x, const std::vector<double>& w, double alpha) {
  double best = kInf;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (w[i] <= 0.0) continue;
    const double m = -x[i];
    if (mass_below(x, w, m) <= alpha) best = std::min(best, m);
  }
  return best;
}

/// Same infimum by a grid scan at the given step followed by bisection.
inline double var_scan(const std::vector<double>& x, const std::vector<double>& w, double alpha, double step = 1e-4) {
  double lo = -1.0, hi = 1.0;
  for (double v : x) {
    lo = std::min(lo, -std::abs(v) - 1.0);
    hi = std::max(hi, std::abs(v) + 1.0);
  }
  double m = lo;
  while (m <= hi && mass_below(x, w, m) > alpha) m += step;
  double a = m - step, b = m;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (a + b);
    (mass_below(x, w, mid) <= alpha ? b : a) = mid;
  }
  return b;
}

/// Rockafellar-Uryasev: min_t { t + E[(-X - t)^+] / alpha }. The objective is
/// convex piecewise linear with kinks at t = -x_i.
inline double es(const std::vector<double>& x, const std::vector<double>& w, double alpha) {
  double best = kInf;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = -x[i];
    double tail = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) tail += w[j] * std::max(-x[j] - t, 0.0);
    best = std::min(best, t + tail / alpha);
  }
  return best;
}

/// (1/alpha) * integral over (0, alpha] of beta -> VaR_beta, integrated
/// exactly: the integrand is constant between consecutive cumulative masses,
/// and is evaluated at each piece's midpoint with the brute-force VaR.
inline double es_steps(const std::vector<double>& x, const std::vector<double>& w, double alpha) {
  std::vector<double> cuts{0.0, alpha};
  // Every partial sum of the weights is a candidate breakpoint.
  const std::size_t n = x.size();
  for (unsigned long long bits = 1; bits < (1ULL << n); ++bits) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (bits >> i & 1ULL) s += w[i];
    if (s > 0.0 && s < alpha) cuts.push_back(s);
  }
  std::sort(cuts.begin(), cuts.end());
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double len = cuts[k + 1] - cuts[k];
    if (len <= 0.0) continue;
    integral += len * var(x, w, 0.5 * (cuts[k] + cuts[k + 1]));
  }
  return integral / alpha;
}

/// inf{m : accept(X + m) } by scanning m on a grid, then bisecting.
inline double capital(const std::function<bool(double)>& accept_shift, double lo, double hi, double step) {
  double m = lo;
  while (m <= hi && !accept_shift(m)) m += step;
  if (m > hi) return kInf;
  double a = m - step, b = m;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (a + b);
    (accept_shift(mid) ? b : a) = mid;
  }
  return b;
}

/// Solve the square system A y = b by Gaussian elimination with partial
/// pivoting; empty when singular.
inline std::optional<std::vector<double>> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (std::abs(a[p][c]) < 1e-12) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

/// Vertices of {y >= 0 : <y, v_j> <= 1 for all j}, by trying every choice
/// of d tight constraints. Assumes every coordinate has a positive entry in
/// some v_j, so the polyhedron is bounded.
inline std::vector<std::vector<double>> polar_vertices(const std::vector<std::vector<double>>& v) {
  const std::size_t d = v.front().size();
  // Rows: the vertex constraints, then the sign constraints y_i >= 0.
  std::vector<std::vector<double>> rows = v;
  std::vector<double> rhs(v.size(), 1.0);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> e(d, 0.0);
    e[i] = 1.0;
    rows.push_back(e);
    rhs.push_back(0.0);
  }
  std::vector<std::vector<double>> out;
  const std::size_t m = rows.size();
  std::vector<std::size_t> pick(d);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == d) {
      std::vector<std::vector<double>> a;
      std::vector<double> b;
      for (auto r : pick) {
        a.push_back(rows[r]);
        b.push_back(rhs[r]);
      }
      auto y = solve(a, b);
      if (!y) return;
      for (double c : *y)
        if (c < -1e-10) return;
      for (const auto& vj : v) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) s += (*y)[i] * vj[i];
        if (s > 1.0 + 1e-10) return;
      }
      out.push_back(*y);
      return;
    }
    for (std::size_t r = start; r < m; ++r) {
      pick[depth] = r;
      rec(r + 1, depth + 1);
    }
  };
  rec(0, 0);
  return out;
}

/// Gauge of X >= 0 for the solid hull of conv(v): max over polar vertices
/// of <y, X>, with +inf when X charges a coordinate no vertex reaches.
inline double polytope_gauge(const std::vector<std::vector<double>>& v, const std::vector<double>& x) {
  const std::size_t d = x.size();
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < d; ++i) {
    double top = 0.0;
    for (const auto& vj : v) top = std::max(top, vj[i]);
    if (top > 0.0) keep.push_back(i);
    else if (x[i] > 0.0) return kInf;
  }
  if (keep.empty()) return 0.0;
  std::vector<std::vector<double>> vr;
  for (const auto& vj : v) {
    std::vector<double> r;
    for (auto i : keep) r.push_back(vj[i]);
    vr.push_back(r);
  }
  double best = 0.0;
  for (const auto& y : polar_vertices(vr)) {
    double s = 0.0;
    for (std::size_t k = 0; k < keep.size(); ++k) s += y[k] * x[keep[k]];
    best = std::max(best, s);
  }
  return best;
}

/// sup over the solid hull of conv(v) of <z, X> for z >= 0: attained at a vertex.
inline double polytope_support(const std::vector<std::vector<double>>& v, const std::vector<double>& z) {
  double best = 0.0;
  for (const auto& vj : v) {
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) s += z[i] * vj[i];
    best = std::max(best, s);
  }
  return best;
}

/// sum_{n >= 1} w q^n f(n), summed until the terms are negligible.
inline double series(double w, double q, const std::function<double(double)>& f, std::size_t max_terms = 100000) {
  double s = 0.0, qn = 1.0;
  for (std::size_t n = 1; n <= max_terms; ++n) {
    qn *= q;
    const double term = w * qn * f(static_cast<double>(n));
    s += term;
    if (qn * (1.0 + static_cast<double>(n) * static_cast<double>(n)) < 1e-20 && n > 50) break;
  }
  return s;
}

/// Loss of the tail X_n = a n + b shifted by m, under weights w q^n:
/// sum_n w q^n (X_n + m)^-.
inline double shifted_shortfall(double w, double q, double a, double b, double m) {
  return series(w, q, [&](double n) { return std::max(-(a * n + b + m), 0.0); });
}

/// inf{m : shifted_shortfall(m) <= level}. The map is convex, nonincreasing
/// and linear between the kinks m = -(a k + b); the root is bracketed by
/// kinks and then read off the linear piece exactly.
inline double affine_capital(double w, double q, double a, double b, double level) {
  auto f = [&](double m) { return shifted_shortfall(w, q, a, b, m); };
  std::vector<double> kinks;
  for (int k = 1; k <= 4000; ++k) kinks.push_back(-(a * k + b));
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
  // Below the smallest kink every index with a loss there stays active, so
  // the slope there is constant; start one unit lower to have a bracket.
  std::vector<double> pts;
  pts.push_back(kinks.front() - 1e6);
  for (double k : kinks) pts.push_back(k);
  std::size_t hi = 0;
  while (hi < pts.size() && f(pts[hi]) > level) ++hi;
  if (hi == 0) return -kInf;
  if (hi == pts.size()) return kInf;
  const double m0 = pts[hi - 1], m1 = pts[hi];
  const double f0 = f(m0), f1 = f(m1);
  if (f0 == f1) return m1;
  return m0 + (f0 - level) * (m1 - m0) / (f0 - f1);
}

}  // namespace oracle
