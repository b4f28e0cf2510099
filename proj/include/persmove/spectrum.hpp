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
#include <map>
#include <span>
#include <vector>

#include "persmove/types.hpp"

namespace persmove {

/// Count of persistent movements per size, at native tick resolution.
class SizeHistogram {
 public:
  SizeHistogram() = default;

  void add(Ticks size, std::int64_t count = 1);

  [[nodiscard]] const std::map<Ticks, std::int64_t>& entries() const { return entries_; }
  [[nodiscard]] std::int64_t total_pairs() const { return total_; }
  [[nodiscard]] bool empty() const { return entries_.empty(); }

  /// Flattened list of sizes in ascending order (each repeated `count` times).
  [[nodiscard]] std::vector<Ticks> sizes() const;

 private:
  std::map<Ticks, std::int64_t> entries_;
  std::int64_t total_ = 0;
};

struct SpectrumPoint {
  Ticks size = 0;
  std::int64_t count = 0;
  /// Contribution of this size to the total variation: 2 * count * size.
  Ticks contribution = 0;

  friend bool operator==(const SpectrumPoint&, const SpectrumPoint&) = default;
};

using Spectrum = std::vector<SpectrumPoint>;

SizeHistogram histogram(std::span<const PersistentPair> pairs);
SizeHistogram histogram_of_sizes(std::span<const Ticks> sizes);

/// Points ascending in size.
Spectrum spectrum(const SizeHistogram& h);

/// Sum of all contributions; equals tv_total - tv_top of the source.
Ticks spectrum_area(const Spectrum& s);

}  // namespace persmove
