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

#include <cstdint>
#include <optional>
#include <vector>

namespace persmove {

/// Price expressed as an integer number of instrument ticks.
using Ticks = std::int64_t;

/// Nanoseconds since the Unix epoch.
using TimeNs = std::int64_t;

inline constexpr TimeNs kNanosPerSecond = 1'000'000'000;
inline constexpr TimeNs kNanosPerDay = 86'400 * kNanosPerSecond;
inline constexpr TimeNs kNanosPerWeek = 7 * kNanosPerDay;

struct Sample {
  TimeNs time = 0;
  Ticks value = 0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

enum class ExtremumKind : std::uint8_t { minimum, maximum };

struct Extremum {
  TimeNs time = 0;
  Ticks value = 0;
  ExtremumKind kind = ExtremumKind::minimum;

  friend bool operator==(const Extremum&, const Extremum&) = default;
};

/// A (minimum, maximum) pair whose movement contains no larger reversal.
/// `size` is always max_ext.value - min_ext.value and strictly positive.
struct PersistentPair {
  Extremum min_ext;
  Extremum max_ext;
  Ticks size = 0;

  friend bool operator==(const PersistentPair&, const PersistentPair&) = default;
};

/// Alternating extrema whose persistence is not yet decided.
/// While streaming, `pending` holds the latest sample that has not been
/// classified; a finished decomposition folds it into `extrema`.
struct TopStructure {
  std::vector<Extremum> extrema;
  std::optional<Sample> pending;

  friend bool operator==(const TopStructure&, const TopStructure&) = default;
};

/// Output of a decomposition. Always satisfies
/// tv_total == tv_top + sum(2 * pair.size).
struct Decomposition {
  std::vector<PersistentPair> pairs;
  TopStructure top;
  Ticks tv_total = 0;
  Ticks tv_top = 0;

  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

}  // namespace persmove
