#include "surplus/sampler.hpp"

#include <cmath>

namespace surplus {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng trial_rng(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ trial);
  h = splitmix64(h ^ (stream * 0xD1B54A32D192ED03ULL));
  return Rng(h);
}

double uniform(Rng& rng, double lo, double hi) {
  // 53 random bits mapped to [0, 1); independent of the standard library's
  // distribution implementation so reports are portable.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Sampler::Sampler(ScenarioSpace space, std::uint64_t seed, SamplerMix mix)
    : space_(std::move(space)), seed_(seed), mix_(mix) {}

Position Sampler::draw(std::uint64_t trial, std::uint64_t stream) const {
  Rng rng = trial_rng(seed_, trial, stream);
  return draw(rng);
}

Position Sampler::draw(Rng& rng) const {
  const double boundary = oracle_ ? mix_.boundary : 0.0;
  const double total = mix_.uniform + mix_.grid + mix_.sparse + boundary;
  double u = uniform(rng, 0.0, total);
  Position x;
  if ((u -= mix_.uniform) < 0.0) {
    x = uniform_point(rng);
  } else if ((u -= mix_.grid) < 0.0) {
    x = grid_point(rng);
  } else if ((u -= mix_.sparse) < 0.0) {
    x = sparse_point(rng);
  } else {
    x = boundary_point(rng);
  }
  return space_.canonical(std::move(x));
}

Position Sampler::draw_nonnegative(Rng& rng) const {
  Position w = Position::zeros(space_.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (uniform(rng, 0.0, 1.0) < 0.25) continue;
    w[i] = uniform(rng, 0.0, mix_.box);
  }
  return space_.canonical(std::move(w));
}

Position Sampler::uniform_point(Rng& rng) const {
  Position x = Position::zeros(space_.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = uniform(rng, -mix_.box, mix_.box);
  return x;
}

Position Sampler::grid_point(Rng& rng) const {
  Position x = Position::zeros(space_.size());
  const auto steps = static_cast<long>(std::floor(2.0 * mix_.box));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto k = static_cast<long>(std::floor(uniform(rng, 0.0, static_cast<double>(2 * steps + 1))));
    x[i] = 0.5 * static_cast<double>(k - steps);
  }
  return x;
}

Position Sampler::sparse_point(Rng& rng) const {
  Position x = Position::zeros(space_.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = uniform(rng, 0.0, mix_.box);
  const std::size_t losses = 1 + (x.size() > 1 && uniform(rng, 0.0, 1.0) < 0.5 ? 1 : 0);
  for (std::size_t k = 0; k < losses; ++k) {
    auto i = static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(x.size())));
    if (i >= x.size()) i = x.size() - 1;
    x[i] = -uniform(rng, 0.0, mix_.box);
  }
  return x;
}

Position Sampler::boundary_point(Rng& rng) const {
  Position a = space_.canonical(uniform_point(rng));
  Position b = space_.canonical(uniform_point(rng));
  const bool in_a = oracle_(a);
  if (in_a == oracle_(b)) return a;
  // Invariant: oracle(lo) == in_a, oracle(hi) != in_a.
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (oracle_(a + (b - a) * mid) == in_a) lo = mid;
    else hi = mid;
  }
  const double t = uniform(rng, 0.0, 1.0) < 0.5 ? lo : hi;
  return a + (b - a) * t;
}

}  // namespace surplus
