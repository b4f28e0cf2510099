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

// Discrete power-law fitting of persistent-movement sizes.
//
// Counts follow n(m) ~ m^-(alpha + 1), so the spectrum S(m) = 2 n(m) m
// scales as A m^-alpha. The count exponent is estimated by maximum
// likelihood with the Hurwitz zeta normalizer; xmin is the candidate that
// minimizes the Kolmogorov-Smirnov distance between data and model.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "persmove/spectrum.hpp"
#include "persmove/types.hpp"

namespace persmove {

struct PowerLawFit {
  Ticks xmin = 0;
  double count_exponent = 0.0;
  /// Spectrum exponent, always count_exponent - 1.
  double alpha = 0.0;
  double ks_distance = 0.0;
  std::size_t n_tail = 0;
  /// Spectrum amplitude A; sum of A m^-alpha over the observed tail sizes
  /// equals the tail's persistent total variation.
  double amplitude = 0.0;
};

struct XminRange {
  Ticks lo = 1;
  Ticks hi = 0;  // 0 = unbounded

  [[nodiscard]] bool contains(Ticks x) const { return x >= lo && (hi == 0 || x <= hi); }
};

struct FitConfig {
  XminRange xmin_range{};
  std::size_t min_tail = 50;
  /// Search bracket for the count exponent.
  double exponent_lo = 1.01;
  double exponent_hi = 6.0;
};

/// sum_{k >= q} k^-s for s > 1, q > 0.
double hurwitz_zeta(double s, double q);

/// Closed-form approximation 1 + n / sum ln(x / (xmin - 1/2)).
double approx_count_exponent(std::span<const Ticks> sizes, Ticks xmin);

/// Maximum-likelihood count exponent of a discrete power law on m >= xmin.
/// Requires at least two samples, all >= xmin, not all equal.
double mle_count_exponent(std::span<const Ticks> sizes, Ticks xmin,
                          const FitConfig& config = {});

/// sup over integers m >= xmin of |empirical CDF - model CDF|, using only
/// samples >= xmin. Requires at least two such samples.
double ks_distance(std::span<const Ticks> sizes, Ticks xmin, double exponent);

/// Scans xmin candidates over the observed sizes and returns the fit with
/// the smallest KS distance (ties go to the smaller xmin).
/// Throws InsufficientDataError when no candidate leaves min_tail samples.
PowerLawFit fit(const SizeHistogram& h, const FitConfig& config = {});

/// Fit with xmin fixed rather than searched.
PowerLawFit fit_at(const SizeHistogram& h, Ticks xmin, const FitConfig& config = {});

/// A m^-alpha for the given fit.
double fitted_spectrum(const PowerLawFit& f, Ticks size);

}  // namespace persmove
