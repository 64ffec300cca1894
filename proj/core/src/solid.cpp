#include "surplus/solid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "surplus/error.hpp"
#include "surplus/lp.hpp"
#include "surplus/sampler.hpp"

namespace surplus {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRayCap = 1e9;

bool nonnegative(const Position& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return v >= 0.0; });
}

}  // namespace

SolidSet SolidSet::box(std::vector<double> upper) {
  if (upper.empty()) throw InputError("box needs at least one coordinate");
  for (double u : upper)
    if (std::isnan(u) || u < 0.0) throw InputError("box upper bounds must lie in [0, inf]");
  SolidSet c;
  c.kind_ = Kind::box;
  c.dim_ = upper.size();
  c.radially_bounded_ = std::all_of(upper.begin(), upper.end(), [](double u) { return std::isfinite(u); });
  c.upper_ = std::move(upper);
  c.name_ = "box";
  return c;
}

SolidSet SolidSet::polytope(std::vector<std::vector<double>> vertices) {
  if (vertices.empty()) throw InputError("polytope needs at least one vertex");
  const std::size_t n = vertices.front().size();
  if (n == 0) throw InputError("polytope vertices must be nonempty");
  for (const auto& v : vertices) {
    if (v.size() != n) throw InputError("polytope vertices must share one dimension");
    for (double x : v)
      if (!std::isfinite(x) || x < 0.0) throw InputError("polytope vertices must be finite and nonnegative");
  }
  SolidSet c;
  c.kind_ = Kind::polytope;
  c.dim_ = n;
  c.vertices_ = std::move(vertices);
  c.name_ = "polytope";
  return c;
}

SolidSet SolidSet::sublevel(std::size_t dim, Gauge g, double level, bool radially_bounded, std::string name) {
  if (dim == 0) throw InputError("sublevel set needs a positive dimension");
  if (!g) throw InputError("sublevel set '" + name + "' has no gauge");
  if (!std::isfinite(level)) throw InputError("sublevel level must be finite");
  SolidSet c;
  c.kind_ = Kind::sublevel;
  c.dim_ = dim;
  c.gauge_fn_ = std::move(g);
  c.level_ = level;
  c.radially_bounded_ = radially_bounded;
  c.name_ = std::move(name);
  if (!c.contains(Position::zeros(dim))) throw InputError("sublevel set '" + c.name_ + "' must contain 0");
  // Solidity on members found along random rays.
  Rng rng = trial_rng(0x501d, 0, 0);
  for (int t = 0; t < 64; ++t) {
    Position d = Position::zeros(dim);
    for (std::size_t i = 0; i < dim; ++i) d[i] = uniform(rng, 0.0, 1.0);
    const double gd = c.gauge(d);
    if (!(gd > 0.0) || std::isinf(gd)) continue;
    Position x = d * (1.0 / gd);
    for (std::size_t i = 0; i < dim; ++i) x[i] *= 0.999;
    Position v = x;
    for (std::size_t i = 0; i < dim; ++i) v[i] *= uniform(rng, 0.0, 1.0);
    if (c.contains(x) && !c.contains(v)) throw InputError("sublevel set '" + c.name_ + "' is not solid");
  }
  return c;
}

bool SolidSet::contains(const Position& x) const {
  if (x.size() != dim_) throw InputError("position dimension does not match the solid set");
  if (!nonnegative(x)) return false;
  switch (kind_) {
    case Kind::box:
      for (std::size_t i = 0; i < dim_; ++i)
        if (x[i] > upper_[i]) return false;
      return true;
    case Kind::polytope: {
      // Direct test: min sum(lambda) subject to sum_j lambda_j V_j >= X.
      const std::size_t k = vertices_.size();
      std::vector<std::vector<double>> a(dim_, std::vector<double>(k, 0.0));
      std::vector<double> b(dim_);
      for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < k; ++j) a[i][j] = -vertices_[j][i];
        b[i] = -x[i];
      }
      const auto r = lp::maximize(a, b, std::vector<double>(k, -1.0));
      return r.status == lp::Status::optimal && -r.value <= 1.0 + 1e-12;
    }
    case Kind::sublevel:
      return gauge_fn_(x) <= level_;
  }
  return false;
}

double SolidSet::gauge(const Position& x) const {
  if (x.size() != dim_) throw InputError("position dimension does not match the solid set");
  if (!nonnegative(x)) throw InputError("gauge needs a nonnegative position");
  switch (kind_) {
    case Kind::box: {
      double g = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) {
        if (x[i] == 0.0 || std::isinf(upper_[i])) continue;
        if (upper_[i] == 0.0) return kInf;
        g = std::max(g, x[i] / upper_[i]);
      }
      return g;
    }
    case Kind::polytope: {
      // max s subject to s X <= sum_j lambda_j V_j, sum lambda <= 1.
      const std::size_t k = vertices_.size();
      std::vector<std::vector<double>> a(dim_ + 1, std::vector<double>(k + 1, 0.0));
      std::vector<double> b(dim_ + 1, 0.0);
      for (std::size_t i = 0; i < dim_; ++i) {
        a[i][0] = x[i];
        for (std::size_t j = 0; j < k; ++j) a[i][j + 1] = -vertices_[j][i];
      }
      for (std::size_t j = 0; j < k; ++j) a[dim_][j + 1] = 1.0;
      b[dim_] = 1.0;
      std::vector<double> c(k + 1, 0.0);
      c[0] = 1.0;
      const auto r = lp::maximize(a, b, c);
      if (r.status == lp::Status::unbounded) return 0.0;
      if (r.status != lp::Status::optimal) throw ContractError("ray-shooting LP must be feasible");
      return r.value <= 0.0 ? kInf : 1.0 / r.value;
    }
    case Kind::sublevel: {
      if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) return 0.0;
      auto in = [&](double s) { return contains(x * s); };
      if (in(kRayCap)) return 0.0;
      double lo = 0.0;
      double hi = kRayCap;
      if (!in(1e-12)) return kInf;
      lo = 1e-12;
      for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
        const double mid = std::sqrt(lo * hi) > 0.0 && hi / lo > 4.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (in(mid)) lo = mid;
        else hi = mid;
      }
      return 1.0 / lo;
    }
  }
  return kInf;
}

SolidSet::Support SolidSet::support(const std::vector<double>& z) const {
  if (z.size() != dim_) throw InputError("density dimension does not match the solid set");
  for (double v : z)
    if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("support function needs a finite nonnegative density");
  switch (kind_) {
    case Kind::box: {
      double s = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) {
        if (z[i] == 0.0) continue;
        if (std::isinf(upper_[i])) return {kInf, true};
        s += z[i] * upper_[i];
      }
      return {s, true};
    }
    case Kind::polytope: {
      // max z.X subject to X <= sum_j lambda_j V_j, sum lambda <= 1.
      const std::size_t k = vertices_.size();
      std::vector<std::vector<double>> a(dim_ + 1, std::vector<double>(dim_ + k, 0.0));
      std::vector<double> b(dim_ + 1, 0.0);
      for (std::size_t i = 0; i < dim_; ++i) {
        a[i][i] = 1.0;
        for (std::size_t j = 0; j < k; ++j) a[i][dim_ + j] = -vertices_[j][i];
      }
      for (std::size_t j = 0; j < k; ++j) a[dim_][dim_ + j] = 1.0;
      b[dim_] = 1.0;
      std::vector<double> c(dim_ + k, 0.0);
      for (std::size_t i = 0; i < dim_; ++i) c[i] = z[i];
      const auto r = lp::maximize(a, b, c);
      if (r.status != lp::Status::optimal) throw ContractError("support LP of a polytope must be bounded");
      return {r.value, true};
    }
    case Kind::sublevel: {
      // Pattern search over directions d >= 0, sum d = 1, of <z, d> / g(d).
      auto h = [&](const std::vector<double>& d) {
        Position p(d);
        const double g = gauge(p);
        double zd = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) zd += z[i] * d[i];
        if (zd == 0.0) return 0.0;
        return g == 0.0 ? kInf : zd / g;
      };
      std::vector<double> best(dim_, 1.0 / static_cast<double>(dim_));
      double best_v = h(best);
      for (std::size_t i = 0; i < dim_; ++i) {
        std::vector<double> e(dim_, 0.0);
        e[i] = 1.0;
        const double v = h(e);
        if (v > best_v) {
          best_v = v;
          best = e;
        }
      }
      if (std::isinf(best_v)) return {kInf, true};
      double step = 0.25;
      int rounds = 0;
      while (step > 1e-10 && rounds < 20000) {
        ++rounds;
        bool improved = false;
        for (std::size_t i = 0; i < dim_ && !improved; ++i) {
          for (std::size_t j = 0; j < dim_ && !improved; ++j) {
            if (i == j) continue;
            const double move = std::min(step, best[j]);
            if (move <= 0.0) continue;
            auto d = best;
            d[i] += move;
            d[j] -= move;
            const double v = h(d);
            if (v > best_v * (1.0 + 1e-15)) {
              best_v = v;
              best = d;
              improved = true;
            }
          }
        }
        if (!improved) step *= 0.5;
      }
      return {best_v, step <= 1e-10};
    }
  }
  return {kInf, false};
}

double SolidSet::polar_sup(const Position& x) const {
  if (x.size() != dim_) throw InputError("position dimension does not match the solid set");
  if (!nonnegative(x)) throw InputError("polar pairing needs a nonnegative position");
  switch (kind_) {
    case Kind::box: {
      // The polar of [0, u] is {y >= 0 : sum y_i u_i <= 1}.
      double s = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) {
        if (x[i] == 0.0) continue;
        if (upper_[i] == 0.0) return kInf;
        if (std::isfinite(upper_[i])) s = std::max(s, x[i] / upper_[i]);
      }
      return s;
    }
    case Kind::polytope: {
      std::vector<std::vector<double>> a;
      a.reserve(vertices_.size());
      for (const auto& v : vertices_) a.push_back(v);
      const auto r = lp::maximize(a, std::vector<double>(vertices_.size(), 1.0), x.vector());
      if (r.status == lp::Status::unbounded) return kInf;
      if (r.status != lp::Status::optimal) throw ContractError("polar LP must be feasible at y = 0");
      return r.value;
    }
    case Kind::sublevel:
      return gauge(x);
  }
  return kInf;
}

SolidSet SolidSet::restrict(const std::vector<std::size_t>& coords) const {
  for (std::size_t i : coords)
    if (i >= dim_) throw InputError("restriction coordinate out of range");
  if (coords.empty()) throw InputError("restriction needs at least one coordinate");
  switch (kind_) {
    case Kind::box: {
      std::vector<double> u;
      for (std::size_t i : coords) u.push_back(upper_[i]);
      return box(std::move(u));
    }
    case Kind::polytope: {
      std::vector<std::vector<double>> vs;
      for (const auto& v : vertices_) {
        std::vector<double> w;
        for (std::size_t i : coords) w.push_back(v[i]);
        vs.push_back(std::move(w));
      }
      return polytope(std::move(vs));
    }
    case Kind::sublevel: {
      SolidSet c = *this;
      const std::size_t full = dim_;
      auto g = gauge_fn_;
      c.dim_ = coords.size();
      c.gauge_fn_ = [g, coords, full](const Position& y) {
        Position x = Position::zeros(full);
        for (std::size_t k = 0; k < coords.size(); ++k) x[coords[k]] = y[k];
        return g(x);
      };
      return c;
    }
  }
  return *this;
}

nlohmann::json SolidSet::spec() const {
  switch (kind_) {
    case Kind::box: {
      nlohmann::json u = nlohmann::json::array();
      for (double v : upper_) u.push_back(std::isinf(v) ? nlohmann::json("inf") : nlohmann::json(v));
      return {{"kind", "box"}, {"upper", u}};
    }
    case Kind::polytope:
      return {{"kind", "polytope"}, {"vertices", vertices_}};
    case Kind::sublevel:
      return {{"kind", "sublevel"}, {"name", name_}, {"level", level_}};
  }
  return {};
}

}  // namespace surplus
