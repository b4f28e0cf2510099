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
#include <cstdint>

namespace persmove {

struct SelftestOptions {
  std::size_t walks = 200;
  std::size_t walk_length = 5000;
  std::size_t powerlaw_samples = 100'000;
  double powerlaw_exponent = 3.0;
  std::int64_t powerlaw_xmin = 10;
  double exponent_tolerance = 0.05;
};

struct SelftestReport {
  std::size_t walks_checked = 0;
  std::size_t oracle_mismatches = 0;
  std::size_t conservation_failures = 0;
  double fitted_exponent = 0.0;
  std::int64_t fitted_xmin = 0;
  bool fit_ok = false;

  [[nodiscard]] bool passed() const {
    return oracle_mismatches == 0 && conservation_failures == 0 && fit_ok;
  }
};

/// Streaming-vs-oracle equivalence on seeded walks (unit, gaussian and
/// plateau-heavy steps) plus exponent recovery on generated power-law sizes.
SelftestReport run_selftest(std::uint64_t seed, const SelftestOptions& options = {});

}  // namespace persmove
