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

#include "persmove/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "persmove/decomposer.hpp"
#include "persmove/oracle.hpp"
#include "persmove/powerlaw.hpp"
#include "persmove/spectrum.hpp"

namespace persmove {

namespace {

std::vector<std::pair<Ticks, Ticks>> value_pairs(const Decomposition& d) {
  std::vector<std::pair<Ticks, Ticks>> out;
  out.reserve(d.pairs.size());
  for (const PersistentPair& p : d.pairs) out.emplace_back(p.min_ext.value, p.max_ext.value);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SelftestReport run_selftest(std::uint64_t seed, const SelftestOptions& options) {
  SelftestReport report;
  for (std::size_t i = 0; i < options.walks; ++i) {
    oracle::StepDistribution steps;
    switch (i % 3) {
      case 0: steps = oracle::StepDistribution::unit_steps(); break;
      case 1: steps = oracle::StepDistribution::gaussian_steps(3.0); break;
      default:
        steps = oracle::StepDistribution::unit_steps();
        steps.zero_probability = 0.3;
        break;
    }
    const auto walk = oracle::gen_random_walk(options.walk_length, steps, seed + i);
    const Decomposition streamed = decompose(walk);
    const Decomposition swept = oracle::level_sweep_pairs(walk);
    ++report.walks_checked;

    if (value_pairs(streamed) != value_pairs(swept) || streamed.tv_top != swept.tv_top) {
      ++report.oracle_mismatches;
    }
    Ticks persistent = 0;
    for (const PersistentPair& p : streamed.pairs) persistent += 2 * p.size;
    if (streamed.tv_total != streamed.tv_top + persistent || streamed.tv_total != total_variation(walk)) {
      ++report.conservation_failures;
    }
  }

  const auto sizes = oracle::gen_discrete_powerlaw(options.powerlaw_samples, options.powerlaw_exponent,
                                                   options.powerlaw_xmin, seed);
  const PowerLawFit f = fit(histogram_of_sizes(sizes));
  report.fitted_exponent = f.count_exponent;
  report.fitted_xmin = f.xmin;
  report.fit_ok = std::abs(f.count_exponent - options.powerlaw_exponent) <= options.exponent_tolerance;
  return report;
}

}  // namespace persmove
