#include "surplus/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "surplus/error.hpp"

namespace surplus {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kEnd = SeqPiece::end;
// Largest number of explicit entries a single sign analysis may create.
constexpr std::uint64_t kExplicitCap = 1'000'000;

double pow_n(double r, std::uint64_t n) {
  if (n == 0) return 1.0;
  return std::pow(r, static_cast<double>(n));
}

// Bound on |sum c r^n|.
double geo_bound(const std::vector<GeoTerm>& geo, std::uint64_t n) {
  double e = 0.0;
  for (const auto& g : geo) e += std::abs(g.c) * pow_n(std::abs(g.r), n);
  return e;
}

// First n in [lo, cap) with pred(n), assuming pred is monotone (false
// then true). Returns cap when pred never holds below cap.
std::uint64_t first_true(std::uint64_t lo, std::uint64_t cap, const std::function<bool(std::uint64_t)>& pred) {
  if (lo >= cap) return cap;
  if (pred(lo)) return lo;
  std::uint64_t step = 1;
  std::uint64_t bad = lo;
  std::uint64_t good = cap;
  for (;;) {
    const std::uint64_t probe = step >= cap - lo ? cap : lo + step;
    if (probe >= cap) break;
    if (pred(probe)) {
      good = probe;
      break;
    }
    bad = probe;
    if (step > (UINT64_MAX >> 2)) break;
    step *= 2;
  }
  if (good == cap) return cap;
  while (good - bad > 1) {
    const std::uint64_t mid = bad + (good - bad) / 2;
    if (pred(mid)) good = mid;
    else bad = mid;
  }
  return good;
}

SeqFormula negate(const SeqFormula& f) {
  SeqFormula g = f;
  g.d = -g.d;
  g.a = -g.a;
  for (auto& t : g.geo) t.c = -t.c;
  return g;
}

SeqFormula constant_formula(double v) {
  SeqFormula f;
  f.d = v;
  return f;
}

SeqFormula add(const SeqFormula& x, const SeqFormula& y) {
  SeqFormula z;
  z.d = x.d + y.d;
  z.a = x.a + y.a;
  std::map<double, double> merged;
  for (const auto& t : x.geo) merged[t.r] += t.c;
  for (const auto& t : y.geo) merged[t.r] += t.c;
  for (const auto& [r, c] : merged)
    if (c != 0.0 && r != 0.0) z.geo.push_back({c, r});
  return z;
}

std::uint64_t clamp_index(double v, std::uint64_t lo, std::uint64_t hi) {
  if (!(v > static_cast<double>(lo))) return lo;
  if (v >= static_cast<double>(hi)) return hi;
  return std::clamp(static_cast<std::uint64_t>(v), lo, hi);
}

class Builder {
public:
  void push(std::uint64_t from, std::uint64_t to, SeqFormula f, int sign) {
    if (from >= to) return;
    out_.push_back({from, to, std::move(f), sign});
  }
  // Explicit entries max(-f(n), 0) on [from, to).
  void explicit_neg(std::uint64_t from, std::uint64_t to, const SeqFormula& f) {
    if (from >= to) return;
    if (to - from > kExplicitCap) throw ContractError("sequence sign pattern needs too many explicit entries");
    for (std::uint64_t n = from; n < to; ++n) push(n, n + 1, constant_formula(std::max(-f.at(n), 0.0)), +1);
  }
  std::vector<SeqPiece> take() { return std::move(out_); }

private:
  std::vector<SeqPiece> out_;
};

// Negative part of one piece with unknown sign.
void neg_piece(const SeqPiece& p, Builder& b) {
  const SeqFormula& f = p.f;
  const std::uint64_t from = p.from;
  const std::uint64_t to = p.to;
  const SeqFormula zero;
  const SeqFormula minus = negate(f);
  // Region [lo, hi) where f has the sign of `s` (s < 0: negative part is -f).
  auto emit = [&](std::uint64_t lo, std::uint64_t hi, int s) {
    if (s < 0) b.push(lo, hi, minus, +1);
    else b.push(lo, hi, zero, +1);
  };

  if (f.geo.empty()) {
    if (f.a == 0.0) {
      emit(from, to, f.d < 0.0 ? -1 : +1);
      return;
    }
    const double root = -f.d / f.a;
    // For a > 0 the negative indices are those below the root.
    const int below = f.a > 0.0 ? -1 : +1;
    std::uint64_t k = clamp_index(std::ceil(root), from, to);
    auto neg_at = [&](std::uint64_t n) { return f.at(n) < 0.0; };
    while (k > from && neg_at(k - 1) != (below < 0)) --k;
    while (k < to && neg_at(k) == (below < 0)) ++k;
    emit(from, k, below);
    emit(k, to, -below);
    return;
  }

  if (f.a != 0.0) {
    const double delta = std::abs(f.a) / 2.0;
    const std::uint64_t nd = first_true(from, to, [&](std::uint64_t n) { return geo_bound(f.geo, n) <= delta; });
    b.explicit_neg(from, nd, f);
    if (nd >= to) return;
    const double root = -f.d / f.a;
    const std::uint64_t wlo = clamp_index(std::ceil(root - 0.5), nd, to);
    const std::uint64_t whi = clamp_index(std::floor(root + 0.5) + 1.0, wlo, to);
    const int below = f.a > 0.0 ? -1 : +1;
    emit(nd, wlo, below);
    b.explicit_neg(wlo, whi, f);
    emit(whi, to, -below);
    return;
  }

  if (f.d != 0.0) {
    const double mag = std::abs(f.d);
    const std::uint64_t nd = first_true(from, to, [&](std::uint64_t n) { return geo_bound(f.geo, n) < mag; });
    b.explicit_neg(from, nd, f);
    emit(nd, to, f.d < 0.0 ? -1 : +1);
    return;
  }

  // Pure geometric: on each parity the group of largest |r| dominates.
  int sigma[2] = {0, 0};
  std::uint64_t start[2] = {from, from};
  for (int par = 0; par < 2; ++par) {
    std::map<double, double> groups;
    for (const auto& t : f.geo) groups[std::abs(t.r)] += t.c * (t.r < 0.0 && par == 1 ? -1.0 : 1.0);
    double dom_r = -1.0;
    double dom_c = 0.0;
    for (const auto& [r, c] : groups)
      if (c != 0.0 && r > dom_r) {
        dom_r = r;
        dom_c = c;
      }
    if (dom_r < 0.0) continue;
    sigma[par] = dom_c < 0.0 ? -1 : +1;
    start[par] = first_true(from, to, [&](std::uint64_t n) {
      double rest = 0.0;
      for (const auto& [r, c] : groups)
        if (r != dom_r) rest += std::abs(c) * pow_n(r / dom_r, n);
      return std::abs(dom_c) > rest;
    });
  }
  const std::uint64_t nd = std::max(start[0], start[1]);
  b.explicit_neg(from, nd, f);
  if (nd >= to) return;
  if (sigma[0] < 0 && sigma[1] < 0) {
    emit(nd, to, -1);
  } else if (sigma[0] >= 0 && sigma[1] >= 0) {
    emit(nd, to, +1);
  } else {
    // -f times the indicator of the negative parity, (1 + s (-1)^n) / 2.
    const double s = sigma[0] < 0 ? 1.0 : -1.0;
    SeqFormula g;
    for (const auto& t : f.geo) {
      g = add(g, SeqFormula{0.0, 0.0, {{-0.5 * t.c, t.r}}});
      g = add(g, SeqFormula{0.0, 0.0, {{-0.5 * s * t.c, -t.r}}});
    }
    b.push(nd, to, g, +1);
  }
}

// sup of one piece over its range.
double sup_piece(const SeqPiece& p) {
  const SeqFormula& f = p.f;
  auto explicit_max = [&](std::uint64_t lo, std::uint64_t hi) {
    if (hi - lo > kExplicitCap) throw ContractError("sequence sup needs too many explicit entries");
    double m = -kInf;
    for (std::uint64_t n = lo; n < hi; ++n) m = std::max(m, f.at(n));
    return m;
  };
  if (p.to != kEnd && p.to - p.from <= 4096) return explicit_max(p.from, p.to);
  std::uint64_t ne = p.from;
  double best = -kInf;
  if (!f.geo.empty()) {
    const double eps = 1e-17 * std::max(1.0, std::abs(f.d));
    ne = first_true(p.from, p.to, [&](std::uint64_t n) { return geo_bound(f.geo, n) <= eps; });
    best = explicit_max(p.from, ne);
    if (ne >= p.to) return best;
  }
  if (f.a > 0.0) return p.to == kEnd ? kInf : std::max(best, f.at(p.to - 1));
  if (f.a < 0.0) return std::max(best, f.at(ne));
  if (p.to == kEnd) return std::max({best, f.d, f.at(ne)});
  return std::max({best, f.at(ne), f.at(p.to - 1)});
}

double series0(double rho, std::uint64_t m) {
  if (m == kEnd) return 0.0;
  return pow_n(rho, m) / (1.0 - rho);
}

double series1(double rho, std::uint64_t m) {
  if (m == kEnd) return 0.0;
  const double md = static_cast<double>(m);
  return pow_n(rho, m) * (md * (1.0 - rho) + rho) / ((1.0 - rho) * (1.0 - rho));
}

double weighted_piece(const SeqPiece& p, double q) {
  const SeqFormula& f = p.f;
  if (f.is_zero()) return 0.0;
  if (p.to != kEnd && p.to - p.from <= 64) {
    double s = 0.0;
    for (std::uint64_t n = p.from; n < p.to; ++n) s += pow_n(q, n) * f.at(n);
    return s;
  }
  double s = 0.0;
  if (f.d != 0.0) s += f.d * (series0(q, p.from) - series0(q, p.to));
  if (f.a != 0.0) s += f.a * (series1(q, p.from) - series1(q, p.to));
  for (const auto& t : f.geo) s += t.c * (series0(q * t.r, p.from) - series0(q * t.r, p.to));
  return s;
}

std::vector<SeqPiece> head_tail(std::vector<double> head, SeqFormula tail) {
  std::vector<SeqPiece> ps;
  std::uint64_t n = 1;
  for (double v : head) {
    if (!std::isfinite(v)) throw InputError("sequence head entries must be finite");
    ps.push_back({n, n + 1, constant_formula(v), 0});
    ++n;
  }
  ps.push_back({n, kEnd, std::move(tail), 0});
  return ps;
}

}  // namespace

double SeqFormula::at(std::uint64_t n) const {
  double v = d + a * static_cast<double>(n);
  for (const auto& t : geo) v += t.c * pow_n(t.r, n);
  return v;
}

bool SeqFormula::is_zero() const noexcept { return d == 0.0 && a == 0.0 && geo.empty(); }

SeqPosition::SeqPosition() : pieces_{{1, kEnd, SeqFormula{}, +1}} {}

SeqPosition::SeqPosition(std::vector<SeqPiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty() || pieces_.front().from != 1 || pieces_.back().to != kEnd)
    throw InputError("sequence pieces must cover all indices from 1");
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const auto& p = pieces_[k];
    if (p.from >= p.to) throw InputError("sequence pieces must be nonempty");
    if (k + 1 < pieces_.size() && pieces_[k + 1].from != p.to) throw InputError("sequence pieces must be consecutive");
    if (!std::isfinite(p.f.d) || !std::isfinite(p.f.a)) throw InputError("sequence formulas must be finite");
    for (const auto& t : p.f.geo)
      if (!std::isfinite(t.c) || !(std::abs(t.r) < 1.0)) throw InputError("geometric tails need |r| < 1");
  }
}

SeqPosition SeqPosition::constant(double c, std::vector<double> head) {
  if (!std::isfinite(c)) throw InputError("constant tail must be finite");
  return SeqPosition(head_tail(std::move(head), constant_formula(c)));
}

SeqPosition SeqPosition::affine(double a, double b, std::vector<double> head) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw InputError("affine tail must be finite");
  return SeqPosition(head_tail(std::move(head), SeqFormula{b, a, {}}));
}

SeqPosition SeqPosition::geometric(double c, double r, std::vector<double> head) {
  if (!std::isfinite(c) || !(std::abs(r) < 1.0)) throw InputError("geometric tail needs finite c and |r| < 1");
  SeqFormula f;
  if (c != 0.0 && r != 0.0) f.geo.push_back({c, r});
  return SeqPosition(head_tail(std::move(head), f));
}

double SeqPosition::operator[](std::uint64_t n) const {
  if (n == 0) throw InputError("sequence indices start at 1");
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), n,
                             [](std::uint64_t v, const SeqPiece& p) { return v < p.from; });
  return std::prev(it)->f.at(n);
}

bool SeqPosition::is_zero() const noexcept {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const SeqPiece& p) { return p.f.is_zero(); });
}

SeqPosition SeqPosition::operator-() const {
  SeqPosition out = *this;
  for (auto& p : out.pieces_) {
    p.f = negate(p.f);
    p.sign = -p.sign;
  }
  return out;
}

SeqPosition operator+(const SeqPosition& x, const SeqPosition& y) {
  if (y.is_zero()) return x;
  if (x.is_zero()) return y;
  std::vector<SeqPiece> out;
  std::size_t i = 0;
  std::size_t j = 0;
  std::uint64_t at = 1;
  while (at != kEnd) {
    const auto& p = x.pieces_[i];
    const auto& q = y.pieces_[j];
    const std::uint64_t to = std::min(p.to, q.to);
    int sign = 0;
    if (p.f.is_zero()) sign = q.sign;
    else if (q.f.is_zero()) sign = p.sign;
    else if (p.sign == q.sign) sign = p.sign;
    out.push_back({at, to, add(p.f, q.f), sign});
    at = to;
    if (p.to == to) ++i;
    if (q.to == to) ++j;
  }
  return SeqPosition(std::move(out));
}

SeqPosition operator-(const SeqPosition& x, const SeqPosition& y) { return x + (-y); }

SeqPosition operator*(double s, const SeqPosition& x) {
  if (!std::isfinite(s)) throw InputError("sequence scale must be finite");
  if (s == 0.0) return SeqPosition();
  SeqPosition out = x;
  for (auto& p : out.pieces_) {
    p.f.d *= s;
    p.f.a *= s;
    for (auto& t : p.f.geo) t.c *= s;
    if (s < 0.0) p.sign = -p.sign;
  }
  return out;
}

SeqPosition neg_part(const SeqPosition& x) {
  Builder b;
  for (const auto& p : x.pieces()) {
    if (p.f.is_zero() || p.sign > 0) b.push(p.from, p.to, SeqFormula{}, +1);
    else if (p.sign < 0) b.push(p.from, p.to, negate(p.f), +1);
    else neg_piece(p, b);
  }
  return SeqPosition(b.take());
}

SeqPosition pos_part(const SeqPosition& x) { return neg_part(-x); }

double sup(const SeqPosition& x) {
  double s = -kInf;
  for (const auto& p : x.pieces()) s = std::max(s, sup_piece(p));
  return s;
}

SeqPosition truncate(const SeqPosition& x, double level) {
  if (!(level > 0.0) || !std::isfinite(level)) throw InputError("truncation level must be positive and finite");
  const SeqPosition g = neg_part(x);
  if (sup(g) <= level) return -g;
  const SeqPosition excess = neg_part(level * SeqPosition::unit() - g);
  return -(g - excess);
}

double weighted_sum(const SeqPosition& x, double w, double q) {
  if (!(q > 0.0 && q < 1.0)) throw InputError("weighted sum needs 0 < q < 1");
  double s = 0.0;
  for (const auto& p : x.pieces()) s += weighted_piece(p, q);
  return w * s;
}

SeqFunctional SeqFunctional::weighted_shortfall(double w, double q) {
  if (!(w > 0.0) || !std::isfinite(w)) throw InputError("weighted shortfall needs w > 0");
  if (!(q > 0.0 && q < 1.0)) throw InputError("weighted shortfall needs 0 < q < 1");
  SeqFunctional f;
  f.kind_ = Kind::weighted_shortfall;
  f.w_ = w;
  f.q_ = q;
  return f;
}

SeqFunctional SeqFunctional::sup_shortfall() { return SeqFunctional{}; }

double SeqFunctional::operator()(const SeqPosition& x) const {
  const SeqPosition g = neg_part(x);
  if (kind_ == Kind::weighted_shortfall) return weighted_sum(g, w_, q_);
  return std::max(0.0, sup(g));
}

nlohmann::json SeqFunctional::spec() const {
  if (kind_ == Kind::weighted_shortfall) return {{"kind", "weighted_shortfall"}, {"w", w_}, {"q", q_}};
  return {{"kind", "sup_shortfall"}};
}

ExtendResult extend(const SeqFunctional& rho, const SeqPosition& x, double tol, double base) {
  if (!(tol > 0.0)) throw InputError("extension tolerance must be positive");
  if (!(base > 1.0)) throw InputError("truncation schedule base must exceed 1");
  ExtendResult r;
  double level = 1.0;
  double prev = rho(truncate(x, level));
  r.trace.emplace_back(level, prev);
  bool done = false;
  for (int k = 0; k < 200 && !done; ++k) {
    level *= base;
    if (level > 1e300) break;
    const double v = rho(truncate(x, level));
    r.trace.emplace_back(level, v);
    if (v < prev - 1e-12 * std::max(1.0, std::abs(prev)))
      throw ContractError("truncated values must be nondecreasing");
    if (std::abs(v - prev) < tol) {
      r.value = v;
      done = true;
    } else if (v > 1.0 / tol && v - prev >= tol) {
      r.value = kInf;
      done = true;
    }
    prev = v;
  }
  if (!done) {
    r.value = kInf;
    r.flags.emplace_back("schedule-exhausted");
  }
  r.closed_form = rho(x);
  if (std::isinf(*r.closed_form) || std::isinf(r.value)) r.agrees = std::isinf(*r.closed_form) == std::isinf(r.value);
  else r.agrees = std::abs(*r.closed_form - r.value) <= 2.0 * tol;
  if (!r.agrees) r.flags.emplace_back("closed-form-disagrees");
  return r;
}

double extend_s_additive(const SeqFunctional& rho, double alpha, const SeqPosition& x, double tol) {
  if (rho.kind() != SeqFunctional::Kind::weighted_shortfall)
    throw InputError("S-additive extension is defined for weighted shortfall sets");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InputError("acceptance level must be finite and >= 0");
  if (!(tol > 0.0)) throw InputError("extension tolerance must be positive");
  const SeqPosition u = SeqPosition::unit();
  auto acceptable = [&](double m) { return rho(x + m * u) <= alpha; };
  constexpr double kMax = 1e12;
  double hi = 1.0;
  while (!acceptable(hi)) {
    hi *= 2.0;
    if (hi > kMax) return kInf;
  }
  double lo = -1.0;
  while (acceptable(lo)) {
    hi = lo;
    lo *= 2.0;
    if (lo < -kMax) throw ContractError("every translate is acceptable");
  }
  for (int it = 0; it < 400 && hi - lo > tol * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (acceptable(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

LawReport uniqueness_check(const SeqFunctional& rho, const std::vector<SeqPosition>& xs, double tol) {
  LawReport rep;
  rep.law = "extension-uniqueness";
  auto same = [&](double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return std::isinf(a) && std::isinf(b);
    return std::abs(a - b) <= 2.0 * tol;
  };
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t k = 0; k < xs.size(); ++k) {
    ++rep.trials;
    const auto two = extend(rho, xs[k], tol, 2.0);
    const auto three = extend(rho, xs[k], tol, 3.0);
    const double closed = rho(xs[k]);
    nlohmann::json row = {{"index", k},
                          {"schedule_2", number_json(two.value)},
                          {"schedule_3", number_json(three.value)},
                          {"closed_form", number_json(closed)}};
    rows.push_back(row);
    if (!same(two.value, three.value) || !same(two.value, closed)) {
      rep.verdict = Verdict::counterexample;
      rep.witness = row;
      return rep;
    }
  }
  rep.witness = {{"values", rows}};
  return rep;
}

void to_json(nlohmann::json& j, const SeqPosition& x) {
  const auto& ps = x.pieces();
  // Head + single tail when the shape allows it.
  bool simple = true;
  for (std::size_t k = 0; k + 1 < ps.size(); ++k)
    simple = simple && ps[k].to == ps[k].from + 1 && ps[k].f.a == 0.0 && ps[k].f.geo.empty();
  const auto& last = ps.back().f;
  if (simple && (last.geo.empty() || (last.geo.size() == 1 && last.d == 0.0 && last.a == 0.0))) {
    std::vector<double> head;
    for (std::size_t k = 0; k + 1 < ps.size(); ++k) head.push_back(ps[k].f.d);
    nlohmann::json tail;
    if (!last.geo.empty()) tail = {{"kind", "geometric"}, {"c", last.geo[0].c}, {"r", last.geo[0].r}};
    else if (last.a != 0.0) tail = {{"kind", "affine"}, {"a", last.a}, {"b", last.d}};
    else tail = {{"kind", "constant"}, {"c", last.d}};
    j = {{"head", head}, {"tail", tail}};
    return;
  }
  nlohmann::json pieces = nlohmann::json::array();
  for (const auto& p : ps) {
    nlohmann::json geo = nlohmann::json::array();
    for (const auto& t : p.f.geo) geo.push_back({t.c, t.r});
    pieces.push_back({{"from", p.from},
                      {"to", p.to == kEnd ? nlohmann::json("inf") : nlohmann::json(p.to)},
                      {"d", p.f.d},
                      {"a", p.f.a},
                      {"geometric", geo}});
  }
  j = {{"pieces", pieces}};
}

void to_json(nlohmann::json& j, const ExtendResult& r) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& [n, v] : r.trace) trace.push_back({{"n", static_cast<std::uint64_t>(n)}, {"value", number_json(v)}});
  j = {{"value", number_json(r.value)}, {"trace", trace}, {"agrees", r.agrees}};
  if (r.closed_form) j["closed_form"] = number_json(*r.closed_form);
  if (!r.flags.empty()) j["flags"] = r.flags;
}

}  // namespace surplus
