#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "surplus/scenario.hpp"

namespace surplus {

using Rng = std::mt19937_64;

/// Independent generator for (seed, trial, stream). Every trial of every
/// checker draws from its own generator, so a witness is replayable from
/// the seed and trial index alone.
Rng trial_rng(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream = 0);

double uniform(Rng& rng, double lo, double hi);

struct SamplerMix {
  double box = 5.0;       ///< payoffs drawn from [-box, box]
  double uniform = 0.4;   ///< continuous uniform on the box
  double grid = 0.2;      ///< half-integer grid points (hits ties and atoms)
  double sparse = 0.2;    ///< mostly gains with one or two losses
  double boundary = 0.2;  ///< bisection toward the membership boundary
};

/// Mixture sampler over a scenario space. The boundary component needs a
/// membership oracle; without one its weight goes to the uniform component.
class Sampler {
public:
  Sampler(ScenarioSpace space, std::uint64_t seed, SamplerMix mix = {});

  void set_boundary_oracle(std::function<bool(const Position&)> oracle) { oracle_ = std::move(oracle); }

  const ScenarioSpace& space() const noexcept { return space_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const SamplerMix& mix() const noexcept { return mix_; }

  /// Canonical position for the given trial.
  Position draw(std::uint64_t trial, std::uint64_t stream = 0) const;
  /// Draw using a caller-owned generator.
  Position draw(Rng& rng) const;

  /// Nonnegative vector with entries in [0, box] (some forced to zero).
  Position draw_nonnegative(Rng& rng) const;

private:
  Position uniform_point(Rng& rng) const;
  Position grid_point(Rng& rng) const;
  Position sparse_point(Rng& rng) const;
  Position boundary_point(Rng& rng) const;

  ScenarioSpace space_;
  std::uint64_t seed_;
  SamplerMix mix_;
  std::function<bool(const Position&)> oracle_;
};

}  // namespace surplus
