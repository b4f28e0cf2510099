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

#include "persmove/rolling.hpp"

#include <algorithm>
#include <future>
#include <string>
#include <thread>

#include "persmove/decomposer.hpp"
#include "persmove/error.hpp"
#include "persmove/spectrum.hpp"

namespace persmove {

RollingPoint fit_window(std::span<const Sample> window, TimeNs window_end, const FitConfig& cfg) {
  RollingPoint pt;
  pt.window_end = window_end;
  Decomposer d;
  for (const Sample& s : window) d.push(s);
  pt.pair_count = d.pairs().size();
  if (pt.pair_count == 0) return pt;
  try {
    pt.fit = fit(histogram(d.pairs()), cfg);
  } catch (const InsufficientDataError&) {
    pt.fit.reset();
  }
  return pt;
}

std::vector<RollingPoint> rolling_fit(std::span<const Sample> series, const RollingConfig& cfg) {
  if (cfg.window <= 0 || cfg.step <= 0) throw InvalidArgument("window and step must be positive");
  if (cfg.step > cfg.window) throw InvalidArgument("step must not exceed window");
  if (series.empty()) throw InputError("rolling fit of an empty series");

  const TimeNs first = series.front().time;
  const TimeNs last = series.back().time;
  const TimeNs span = last - first;
  if (cfg.window > span) {
    throw InsufficientDataError("window (" + std::to_string(cfg.window) + " ns) exceeds series span (" +
                                std::to_string(span) + " ns)");
  }
  const std::size_t count = static_cast<std::size_t>((span - cfg.window) / cfg.step) + 1;

  const auto window_at = [&](std::size_t k) {
    const TimeNs end = first + cfg.window + static_cast<TimeNs>(k) * cfg.step;
    const auto by_time = [](const Sample& s, TimeNs t) { return s.time < t; };
    const auto lo = std::lower_bound(series.begin(), series.end(), end - cfg.window, by_time);
    const auto hi = std::upper_bound(series.begin(), series.end(), end,
                                     [](TimeNs t, const Sample& s) { return t < s.time; });
    return fit_window(std::span<const Sample>(lo, hi), end, cfg.fit);
  };

  // Windows are independent; evaluate them on a few workers and keep the
  // output in window order.
  std::vector<RollingPoint> out(count);
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::min<std::size_t>(count, 8));
  std::vector<std::future<void>> jobs;
  jobs.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t k = w; k < count; k += workers) out[k] = window_at(k);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

}  // namespace persmove
