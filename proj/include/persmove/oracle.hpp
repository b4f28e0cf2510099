// Copyright 2026 The persmove Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Ground truth for the streaming decomposer and the power-law fitter:
// a level-sweep persistence construction and seeded synthetic generators.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "persmove/types.hpp"

namespace persmove::oracle {

/// Collapses a series to its alternating extremum sequence. Plateaus keep
/// their earliest time; both endpoints are included.
std::vector<Extremum> extremum_sequence(std::span<const Sample> series);

/// Persistence by sweeping a detection level upward over the extrema.
///
/// Components are born at minima and merge at maxima; the merge pairs the
/// maximum with the higher of the two components' lowest minima. Equal
/// values are ordered so that earlier extrema are less extreme. A merge
/// is only reported when the dying component is enclosed on both sides,
/// i.e. touches neither end of the series; anything else stays in the top
/// structure. Pairs come out in sweep (level) order.
Decomposition level_sweep_pairs(std::span<const Sample> series);

struct StepDistribution {
  enum class Kind : std::uint8_t { unit, gaussian };
  Kind kind = Kind::unit;
  /// Standard deviation in ticks for Kind::gaussian (rounded to integer).
  double sigma = 1.0;
  /// Probability that a step is replaced by a zero step (plateaus).
  double zero_probability = 0.0;

  static StepDistribution unit_steps() { return {}; }
  static StepDistribution gaussian_steps(double sigma) {
    return {Kind::gaussian, sigma, 0.0};
  }
};

struct WalkTiming {
  TimeNs start = 0;
  TimeNs spacing = kNanosPerSecond;
};

/// Integer random walk of n samples starting at value 0. Timestamps are
/// start + i * spacing. Deterministic for a fixed seed.
std::vector<Sample> gen_random_walk(std::size_t n, const StepDistribution& steps,
                                    std::uint64_t seed, WalkTiming timing = {});

inline constexpr std::int64_t kDefaultPowerLawCap = 1'000'000;

/// Inverse-CDF sampler for P(X = m) proportional to m^-exponent on
/// [xmin, cap]. Holds the cumulative table, so reuse it across draws.
class DiscretePowerLawSampler {
 public:
  DiscretePowerLawSampler(double exponent, std::int64_t xmin,
                          std::int64_t cap = kDefaultPowerLawCap);

  template <class Rng>
  std::int64_t operator()(Rng& rng) const {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return draw(u);
  }

  /// Maps u in [0, 1) to a size through the cumulative table.
  [[nodiscard]] std::int64_t draw(double u) const;

  [[nodiscard]] double exponent() const { return exponent_; }
  [[nodiscard]] std::int64_t xmin() const { return xmin_; }
  [[nodiscard]] std::int64_t cap() const { return cap_; }

  /// Exact mean of the truncated distribution.
  [[nodiscard]] double mean() const { return mean_; }

 private:
  double exponent_;
  std::int64_t xmin_;
  std::int64_t cap_;
  double mean_ = 0.0;
  std::vector<double> cdf_;
};

/// n i.i.d. draws from the truncated discrete power law.
/// Throws InvalidArgument if exponent <= 1 or xmin < 1.
std::vector<std::int64_t> gen_discrete_powerlaw(std::size_t n, double exponent,
                                                std::int64_t xmin, std::uint64_t seed,
                                                std::int64_t cap = kDefaultPowerLawCap);

/// Walk whose steps are +/- a power-law distributed jump (random sign).
/// With 1 < exponent < 3 the persistent-movement sizes inherit a count
/// exponent close to `exponent`.
std::vector<Sample> gen_jump_walk(std::size_t n, double exponent, std::int64_t xmin,
                                  std::uint64_t seed, WalkTiming timing = {},
                                  Ticks start_value = 0);

}  // namespace persmove::oracle
