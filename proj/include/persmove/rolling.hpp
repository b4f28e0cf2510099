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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "persmove/powerlaw.hpp"
#include "persmove/types.hpp"

namespace persmove {

struct RollingConfig {
  TimeNs window = 8 * kNanosPerWeek;
  TimeNs step = 2 * kNanosPerWeek;
  FitConfig fit{};
};

struct RollingPoint {
  TimeNs window_end = 0;
  /// Empty when the window did not leave min_tail sizes in any tail.
  std::optional<PowerLawFit> fit;
  std::size_t pair_count = 0;
};

/// Calendar-time windows [end - window, end], with end starting at
/// first_time + window and advancing by step while end <= last_time.
/// Each window is decomposed from scratch, so a pair belongs to a window
/// only if both of its extrema lie inside it.
///
/// Throws InvalidArgument for a bad config, InputError for an empty series
/// and InsufficientDataError when the window exceeds the series span.
std::vector<RollingPoint> rolling_fit(std::span<const Sample> series, const RollingConfig& cfg);

/// Decomposes and fits one window; the building block of rolling_fit.
RollingPoint fit_window(std::span<const Sample> window, TimeNs window_end, const FitConfig& cfg);

}  // namespace persmove
