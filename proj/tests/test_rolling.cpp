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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "persmove/decomposer.hpp"
#include "persmove/error.hpp"
#include "persmove/oracle.hpp"
#include "persmove/rolling.hpp"

using namespace persmove;

namespace {

constexpr TimeNs kSpacing = 300 * kNanosPerSecond;

std::vector<Sample> stationary(std::size_t weeks, std::uint64_t seed) {
  const std::size_t n = static_cast<std::size_t>(weeks * kNanosPerWeek / kSpacing);
  return oracle::gen_jump_walk(n, 2.0, 1, seed, {0, kSpacing});
}

bool same_fit(const std::optional<PowerLawFit>& a, const std::optional<PowerLawFit>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->xmin == b->xmin && a->alpha == b->alpha && a->n_tail == b->n_tail && a->ks_distance == b->ks_distance &&
         a->amplitude == b->amplitude;
}

}  // namespace

TEST_SUITE("rolling") {
  TEST_CASE("point count, order and spacing") {
    const auto s = stationary(21, 1);
    const TimeNs span = s.back().time - s.front().time;
    RollingConfig cfg;
    const auto pts = rolling_fit(s, cfg);
    REQUIRE(pts.size() == static_cast<std::size_t>((span - cfg.window) / cfg.step + 1));
    CHECK(pts.front().window_end == s.front().time + cfg.window);
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].window_end - pts[i - 1].window_end == cfg.step);
  }

  TEST_CASE("each window equals a standalone fit of its sub-series") {
    const auto s = stationary(16, 2);
    RollingConfig cfg;
    cfg.window = 4 * kNanosPerWeek;
    cfg.step = 3 * kNanosPerWeek;
    for (const RollingPoint& p : rolling_fit(s, cfg)) {
      std::vector<Sample> sub;
      for (const Sample& x : s) {
        if (x.time >= p.window_end - cfg.window && x.time <= p.window_end) sub.push_back(x);
      }
      const RollingPoint alone = fit_window(sub, p.window_end, cfg.fit);
      CHECK(alone.pair_count == p.pair_count);
      CHECK(alone.pair_count == decompose(sub).pairs.size());
      CHECK(same_fit(alone.fit, p.fit));
    }
  }

  TEST_CASE("stationary series: window median near the global estimate") {
    const auto s = stationary(40, 3);
    const PowerLawFit global = fit(histogram(decompose(s).pairs));
    std::vector<double> alphas;
    for (const RollingPoint& p : rolling_fit(s, RollingConfig{})) {
      REQUIRE(p.fit.has_value());
      alphas.push_back(p.fit->alpha);
    }
    std::sort(alphas.begin(), alphas.end());
    const double med = alphas[alphas.size() / 2];
    CAPTURE(global.alpha);
    CHECK(std::abs(med - global.alpha) <= 0.15);
  }

  TEST_CASE("quiet windows are marked without disturbing neighbours") {
    auto s = stationary(3, 4);
    const Ticks level = s.back().value;
    const TimeNs quiet_start = s.back().time;
    for (TimeNs t = quiet_start + kSpacing; t < quiet_start + 4 * kNanosPerWeek; t += kSpacing) s.push_back({t, level});
    const auto tail = stationary(3, 5);
    const TimeNs offset = s.back().time + kSpacing;
    for (const Sample& x : tail) s.push_back({x.time + offset, x.value + level});

    RollingConfig cfg;
    cfg.window = 2 * kNanosPerWeek;
    cfg.step = kNanosPerWeek;
    const auto pts = rolling_fit(s, cfg);
    std::size_t marked = 0;
    for (const RollingPoint& p : pts) {
      if (!p.fit) ++marked;
    }
    CHECK(marked >= 1);
    CHECK(pts.front().fit.has_value());
    CHECK(pts.back().fit.has_value());
  }

  TEST_CASE("configuration and input errors") {
    const auto s = stationary(3, 6);
    RollingConfig cfg;
    CHECK_THROWS_AS(rolling_fit({}, cfg), InputError);
    CHECK_THROWS_AS(rolling_fit(s, cfg), InsufficientDataError);  // 8w window over 3w
    cfg.window = kNanosPerWeek;
    cfg.step = 2 * kNanosPerWeek;
    CHECK_THROWS_AS(rolling_fit(s, cfg), InvalidArgument);
    cfg.step = 0;
    CHECK_THROWS_AS(rolling_fit(s, cfg), InvalidArgument);
  }
}
