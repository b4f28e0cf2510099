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
#include <numeric>
#include <random>
#include <vector>

#include "golden_digest.hpp"
#include "persmove/decomposer.hpp"
#include "persmove/error.hpp"
#include "persmove/oracle.hpp"

using namespace persmove;

namespace {

std::vector<Sample> series_of(std::initializer_list<Ticks> values) {
  std::vector<Sample> out;
  TimeNs t = 0;
  for (Ticks v : values) out.push_back({t++, v});
  return out;
}

Ticks persistent_variation(const Decomposition& d) {
  Ticks s = 0;
  for (const PersistentPair& p : d.pairs) s += 2 * p.size;
  return s;
}

std::vector<Ticks> values_of(const TopStructure& t) {
  std::vector<Ticks> out;
  for (const Extremum& e : t.extrema) out.push_back(e.value);
  if (t.pending) out.push_back(t.pending->value);
  return out;
}

// Walk with every value distinct, so every extremum value is distinct too.
std::vector<Sample> distinct_walk(std::size_t n, std::uint64_t seed) {
  std::vector<Ticks> values(n);
  std::iota(values.begin(), values.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(values.begin(), values.end(), rng);
  std::vector<Sample> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({static_cast<TimeNs>(i), values[i]});
  return out;
}

std::vector<Sample> reversed(std::span<const Sample> s) {
  std::vector<Sample> out;
  const TimeNs end = s.empty() ? 0 : s.back().time;
  for (auto it = s.rbegin(); it != s.rend(); ++it) out.push_back({end - it->time, it->value});
  return out;
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("monotone series has no pairs") {
    Decomposer d;
    for (const Sample& s : series_of({1, 2, 3, 4})) CHECK(d.push(s).empty());
    const TopStructure top = d.top();
    REQUIRE(top.extrema.size() == 1);
    CHECK(top.extrema[0].value == 1);
    CHECK(top.extrema[0].kind == ExtremumKind::minimum);
    REQUIRE(top.pending.has_value());
    CHECK(top.pending->value == 4);

    const Decomposition r = d.finish();
    CHECK(r.pairs.empty());
    CHECK(r.tv_total == 3);
    CHECK(r.tv_top == 3);
  }

  TEST_CASE("5,1,4,2,6 emits one pair at the final push") {
    const auto s = series_of({5, 1, 4, 2, 6});
    Decomposer d;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) CHECK(d.push(s[i]).empty());
    const auto emitted = d.push(s.back());
    REQUIRE(emitted.size() == 1);
    CHECK(emitted[0].min_ext.value == 2);
    CHECK(emitted[0].min_ext.time == 3);
    CHECK(emitted[0].max_ext.value == 4);
    CHECK(emitted[0].max_ext.time == 2);
    CHECK(emitted[0].size == 2);

    const Decomposition r = d.finish();
    CHECK(r.tv_total == 13);
    CHECK(r.tv_top == 9);
    CHECK(values_of(r.top) == std::vector<Ticks>{5, 1, 6});
    CHECK(r.top.extrema.back().kind == ExtremumKind::maximum);
  }

  TEST_CASE("empty stream and single sample") {
    const Decomposition e = Decomposer{}.finish();
    CHECK(e.pairs.empty());
    CHECK(e.top.extrema.empty());
    CHECK(e.tv_total == 0);
    CHECK(e.tv_top == 0);

    const auto one = series_of({7});
    const Decomposition r = decompose(one);
    CHECK(r.pairs.empty());
    CHECK(r.tv_total == 0);
    CHECK(r.tv_top == 0);
    REQUIRE(r.top.extrema.size() == 1);
    CHECK(r.top.extrema[0].value == 7);
  }

  TEST_CASE("total variation") {
    CHECK(total_variation(std::span<const Sample>{}) == 0);
    CHECK(total_variation(series_of({7})) == 0);
    CHECK(total_variation(series_of({5, 1, 4, 2, 6})) == 13);
    const auto w = oracle::gen_random_walk(500, oracle::StepDistribution::gaussian_steps(4.0), 3);
    CHECK(total_variation(w) == total_variation(reversed(w)));
  }

  TEST_CASE("nested swings are emitted innermost first") {
    const auto s = series_of({0, 10, 4, 7, 5, 6, 3, 12});
    const Decomposition r = decompose(s);
    std::vector<Ticks> sizes;
    for (const PersistentPair& p : r.pairs) sizes.push_back(p.size);
    CHECK(sizes == std::vector<Ticks>{1, 3, 7});
  }

  TEST_CASE("out-of-order timestamps are rejected") {
    Decomposer d;
    d.push({10, 1});
    d.push({10, 2});  // equal times are fine
    CHECK_THROWS_AS(d.push({9, 3}), InputError);
  }

  TEST_CASE("plateaus keep the earliest time") {
    const Decomposition r = decompose(series_of({0, 3, 3, 3, 1, 1, 2, 5}));
    REQUIRE(r.pairs.size() == 1);
    CHECK(r.pairs[0].max_ext.time == 1);
    CHECK(r.pairs[0].min_ext.time == 4);
    CHECK(r.pairs[0].size == 2);
  }

  TEST_CASE("equal extrema: the later one is the more extreme") {
    // Two maxima at 5: the earlier one pairs with the minimum between them.
    const Decomposition up = decompose(series_of({0, 5, 2, 5, 1}));
    REQUIRE(up.pairs.size() == 1);
    CHECK(up.pairs[0].max_ext.time == 1);
    CHECK(up.pairs[0].min_ext.value == 2);
    CHECK(values_of(up.top) == std::vector<Ticks>{0, 5, 1});
    CHECK(up.top.extrema[1].time == 3);

    const Decomposition down = decompose(series_of({9, 2, 6, 2, 8}));
    REQUIRE(down.pairs.size() == 1);
    CHECK(down.pairs[0].min_ext.time == 1);
    CHECK(down.top.extrema[1].time == 3);
  }

  TEST_CASE("re-running gives identical output") {
    oracle::StepDistribution steps = oracle::StepDistribution::unit_steps();
    steps.zero_probability = 0.4;
    const auto w = oracle::gen_random_walk(3000, steps, 99);
    const Decomposition a = decompose(w);
    const Decomposition b = decompose(w);
    CHECK(a == b);
  }

  TEST_CASE("conservation holds exactly on random walks") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      oracle::StepDistribution steps = seed % 2 ? oracle::StepDistribution::unit_steps()
                                                : oracle::StepDistribution::gaussian_steps(5.0);
      if (seed % 5 == 0) steps.zero_probability = 0.3;
      const auto w = oracle::gen_random_walk(2000, steps, seed);
      const Decomposition r = decompose(w);
      CHECK(r.tv_total == total_variation(w));
      CHECK(r.tv_total == r.tv_top + persistent_variation(r));
    }
  }

  TEST_CASE("time reversal preserves the pair multiset when extrema are distinct") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const auto w = distinct_walk(300, seed);
      const Decomposition fwd = decompose(w);
      const Decomposition bwd = decompose(reversed(w));
      CHECK(testing::value_multiset(fwd.pairs) == testing::value_multiset(bwd.pairs));
    }
  }

  TEST_CASE("no reversal inside a persistent movement exceeds its size") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      oracle::StepDistribution steps = oracle::StepDistribution::gaussian_steps(3.0);
      steps.zero_probability = seed % 2 ? 0.3 : 0.0;
      const auto w = oracle::gen_random_walk(1500, steps, seed);
      const Decomposition r = decompose(w);
      for (const PersistentPair& p : r.pairs) {
        const bool rising = p.min_ext.time < p.max_ext.time;
        const TimeNs lo = std::min(p.min_ext.time, p.max_ext.time);
        const TimeNs hi = std::max(p.min_ext.time, p.max_ext.time);
        Ticks best = rising ? p.min_ext.value : p.max_ext.value;
        Ticks worst_reversal = 0;
        for (const Sample& s : w) {
          if (s.time < lo || s.time > hi) continue;
          if (rising) {
            best = std::max(best, s.value);
            worst_reversal = std::max(worst_reversal, best - s.value);
          } else {
            best = std::min(best, s.value);
            worst_reversal = std::max(worst_reversal, s.value - best);
          }
        }
        CHECK(worst_reversal <= p.size);
      }
    }
  }

  TEST_CASE("top structure never holds a decidable interior swing") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      const auto w = oracle::gen_random_walk(800, oracle::StepDistribution::gaussian_steps(2.0), seed);
      Decomposer d;
      for (const Sample& s : w) {
        d.push(s);
        const std::vector<Ticks> v = values_of(d.top());
        bool alternates = true;
        bool decidable = false;
        for (std::size_t i = 0; i + 2 < v.size(); ++i) {
          alternates = alternates && (v[i + 1] - v[i] > 0) != (v[i + 2] - v[i + 1] > 0);
        }
        for (std::size_t i = 0; i + 3 < v.size(); ++i) {
          const Ticks a = v[i], b = v[i + 1], c = v[i + 2], x = v[i + 3];
          decidable = decidable || (x > c ? (x >= b && c > a) : (x <= b && c < a));
        }
        REQUIRE(alternates);
        REQUIRE_FALSE(decidable);
      }
    }
  }

  TEST_CASE("every extremum leaves the top structure at most once") {
    const auto w = oracle::gen_random_walk(20000, oracle::StepDistribution::unit_steps(), 5);
    const Decomposition r = decompose(w);
    const auto extrema = oracle::extremum_sequence(w);
    CHECK(2 * r.pairs.size() + r.top.extrema.size() == extrema.size());
  }

  TEST_CASE("clear_pairs keeps the top structure") {
    const auto w = oracle::gen_random_walk(1000, oracle::StepDistribution::unit_steps(), 8);
    Decomposer a;
    Decomposer b;
    std::size_t streamed = 0;
    for (const Sample& s : w) {
      a.push(s);
      streamed += b.push(s).size();
      b.clear_pairs();
    }
    CHECK(streamed == a.pairs().size());
    CHECK(a.top() == b.top());
    CHECK(b.pairs().empty());
  }
}
