#include "surplus/lp.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

#include "surplus/error.hpp"

namespace surplus::lp {

namespace {

constexpr double kEps = 1e-12;

// Tableau with m constraint rows, one objective row and, during phase
// one, an auxiliary row. Columns: n originals, m slacks, one artificial
// variable x0, then the right-hand side.
class Tableau {
public:
  Tableau(const std::vector<std::vector<double>>& a, const std::vector<double>& b, const std::vector<double>& c)
      : m_(b.size()), n_(c.size()), basis_(m_), nonbasis_(n_ + 1), d_(m_ + 2, std::vector<double>(n_ + 2, 0.0)) {
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j) d_[i][j] = a[i][j];
    for (std::size_t i = 0; i < m_; ++i) {
      basis_[i] = static_cast<long>(n_ + i);
      d_[i][n_] = -1.0;
      d_[i][n_ + 1] = b[i];
    }
    for (std::size_t j = 0; j < n_; ++j) {
      nonbasis_[j] = static_cast<long>(j);
      d_[m_][j] = -c[j];
    }
    nonbasis_[n_] = -1;
    d_[m_ + 1][n_] = 1.0;
  }

  Result solve() {
    Result r;
    std::size_t row = 0;
    for (std::size_t i = 1; i < m_; ++i)
      if (d_[i][n_ + 1] < d_[row][n_ + 1]) row = i;
    if (m_ > 0 && d_[row][n_ + 1] < -kEps) {
      pivot(row, n_);
      if (!run(true) || d_[m_ + 1][n_ + 1] < -1e-9) {
        r.status = Status::infeasible;
        return r;
      }
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] != -1) continue;
        std::size_t s = n_ + 1;
        for (std::size_t j = 0; j <= n_; ++j)
          if (s == n_ + 1 || d_[i][j] < d_[i][s] || (d_[i][j] == d_[i][s] && nonbasis_[j] < nonbasis_[s])) s = j;
        pivot(i, s);
      }
    }
    if (!run(false)) {
      r.status = Status::unbounded;
      r.value = std::numeric_limits<double>::infinity();
      return r;
    }
    r.status = Status::optimal;
    r.x.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_) r.x[static_cast<std::size_t>(basis_[i])] = d_[i][n_ + 1];
    r.value = d_[m_][n_ + 1];
    return r;
  }

private:
  void pivot(std::size_t r, std::size_t s) {
    const double inv = 1.0 / d_[r][s];
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      const double f = d_[i][s] * inv;
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n_ + 2; ++j)
        if (j != s) d_[i][j] -= d_[r][j] * f;
      d_[i][s] = -f;
    }
    for (std::size_t j = 0; j < n_ + 2; ++j)
      if (j != s) d_[r][j] *= inv;
    d_[r][s] = inv;
    std::swap(basis_[r], nonbasis_[s]);
  }

  // Bland's rule: entering column with the smallest variable index among
  // improving ones, leaving row by ratio test with index tie-breaks.
  bool run(bool phase_one) {
    const std::size_t x = phase_one ? m_ + 1 : m_;
    for (;;) {
      std::size_t s = n_ + 1;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (!phase_one && nonbasis_[j] == -1) continue;
        if (d_[x][j] < -kEps && (s == n_ + 1 || nonbasis_[j] < nonbasis_[s])) s = j;
      }
      if (s == n_ + 1) return true;
      std::size_t r = m_;
      for (std::size_t i = 0; i < m_; ++i) {
        if (d_[i][s] < kEps) continue;
        if (r == m_) {
          r = i;
          continue;
        }
        const double lhs = d_[i][n_ + 1] / d_[i][s];
        const double rhs = d_[r][n_ + 1] / d_[r][s];
        if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[r])) r = i;
      }
      if (r == m_) return false;
      pivot(r, s);
    }
  }

  std::size_t m_;
  std::size_t n_;
  std::vector<long> basis_;
  std::vector<long> nonbasis_;
  std::vector<std::vector<double>> d_;
};

}  // namespace

Result maximize(const std::vector<std::vector<double>>& a, const std::vector<double>& b, const std::vector<double>& c) {
  if (a.size() != b.size()) throw InputError("LP: one right-hand side per constraint row is required");
  for (const auto& row : a)
    if (row.size() != c.size()) throw InputError("LP: constraint rows must match the objective length");
  Tableau t(a, b, c);
  return t.solve();
}

}  // namespace surplus::lp
