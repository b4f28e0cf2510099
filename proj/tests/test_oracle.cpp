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

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
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

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "missing fixture " << path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("level sweep on small series") {
    CHECK(oracle::level_sweep_pairs(series_of({1, 2, 3, 4})).pairs.empty());

    const Decomposition r = oracle::level_sweep_pairs(series_of({5, 1, 4, 2, 6}));
    REQUIRE(r.pairs.size() == 1);
    CHECK(r.pairs[0].min_ext.value == 2);
    CHECK(r.pairs[0].max_ext.value == 4);
    CHECK(r.tv_total == 13);
    CHECK(r.tv_top == 9);
  }

  TEST_CASE("constant and empty series") {
    const Decomposition c = oracle::level_sweep_pairs(series_of({4, 4, 4}));
    CHECK(c.pairs.empty());
    CHECK(c.tv_total == 0);
    CHECK(oracle::level_sweep_pairs({}).top.extrema.empty());
  }

  TEST_CASE("extremum sequence alternates and keeps the earliest plateau time") {
    const auto e = oracle::extremum_sequence(series_of({3, 3, 5, 5, 5, 1, 2}));
    REQUIRE(e.size() == 4);
    CHECK(e[0].time == 0);
    CHECK(e[1].value == 5);
    CHECK(e[1].time == 2);
    CHECK(e[1].kind == ExtremumKind::maximum);
    CHECK(e[2].kind == ExtremumKind::minimum);
    CHECK(e[3].value == 2);
  }

  TEST_CASE("walk generator") {
    CHECK(oracle::gen_random_walk(0, oracle::StepDistribution::unit_steps(), 1).empty());

    const auto a = oracle::gen_random_walk(1000, oracle::StepDistribution::gaussian_steps(2.0), 17);
    CHECK(a == oracle::gen_random_walk(1000, oracle::StepDistribution::gaussian_steps(2.0), 17));
    CHECK(a != oracle::gen_random_walk(1000, oracle::StepDistribution::gaussian_steps(2.0), 18));
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i].time > a[i - 1].time);

    const auto u = oracle::gen_random_walk(1000, oracle::StepDistribution::unit_steps(), 4);
    for (std::size_t i = 1; i < u.size(); ++i) CHECK(std::abs(u[i].value - u[i - 1].value) == 1);
  }

  TEST_CASE("golden walk n=5 seed=42") {
    const auto rows = read_csv(PM_FIXTURES "/walk_n5_seed42.csv");
    const auto w = oracle::gen_random_walk(5, oracle::StepDistribution::unit_steps(), 42);
    REQUIRE(rows.size() == w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      CHECK(std::stoll(rows[i][0]) == w[i].time);
      CHECK(std::stoll(rows[i][1]) == w[i].value);
    }
  }

  TEST_CASE("frozen pair digests match oracle and streaming") {
    const auto rows = read_csv(PM_FIXTURES "/oracle_digests.csv");
    REQUIRE(rows.size() == 60);
    for (const auto& row : rows) {
      oracle::StepDistribution steps = row[1] == "unit" ? oracle::StepDistribution::unit_steps()
                                                        : oracle::StepDistribution::gaussian_steps(std::stod(row[2]));
      steps.zero_probability = std::stod(row[3]);
      const auto w = oracle::gen_random_walk(std::stoull(row[4]), steps, std::stoull(row[0]));
      const Decomposition swept = oracle::level_sweep_pairs(w);
      const Decomposition streamed = decompose(w);
      CAPTURE(row[0]);
      CHECK(std::to_string(swept.pairs.size()) == row[5]);
      CHECK(std::to_string(swept.tv_total) == row[6]);
      CHECK(std::to_string(swept.tv_top) == row[7]);
      CHECK(testing::pair_digest(swept.pairs) == row[8]);
      CHECK(testing::pair_digest(streamed.pairs) == row[8]);
    }
  }

  TEST_CASE("oracle and streaming agree including times and top structure") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
      oracle::StepDistribution steps = seed % 2 ? oracle::StepDistribution::unit_steps()
                                                : oracle::StepDistribution::gaussian_steps(1.5);
      steps.zero_probability = seed % 3 == 0 ? 0.3 : 0.0;
      const auto w = oracle::gen_random_walk(200 + 10 * seed, steps, seed);
      const Decomposition swept = oracle::level_sweep_pairs(w);
      const Decomposition streamed = decompose(w);
      CAPTURE(seed);
      CHECK(testing::sorted_by_time(swept.pairs) == testing::sorted_by_time(streamed.pairs));
      CHECK(swept.top.extrema == streamed.top.extrema);
      CHECK(swept.tv_total == streamed.tv_total);
      CHECK(swept.tv_top == streamed.tv_top);
    }
  }

  TEST_CASE("power-law generator support and validation") {
    const auto x = oracle::gen_discrete_powerlaw(20000, 2.5, 7, 3);
    for (auto v : x) {
      CHECK(v >= 7);
      CHECK(v <= oracle::kDefaultPowerLawCap);
    }
    CHECK(x == oracle::gen_discrete_powerlaw(20000, 2.5, 7, 3));
    CHECK_THROWS_AS(oracle::DiscretePowerLawSampler(1.0, 10), InvalidArgument);
    CHECK_THROWS_AS(oracle::DiscretePowerLawSampler(0.5, 10), InvalidArgument);
    CHECK_THROWS_AS(oracle::DiscretePowerLawSampler(2.0, 0), InvalidArgument);

    const oracle::DiscretePowerLawSampler s(3.0, 10);
    CHECK(s.draw(0.0) == 10);
    CHECK(s.draw(std::nextafter(1.0, 0.0)) <= s.cap());
  }

  TEST_CASE("empirical mean within 3 standard errors of the truncated mean") {
    // Moments summed directly over the truncated support.
    const double exponent = 3.0;
    const std::int64_t xmin = 10;
    const std::int64_t cap = oracle::kDefaultPowerLawCap;
    long double z = 0;
    long double m1 = 0;
    long double m2 = 0;
    for (std::int64_t m = cap; m >= xmin; --m) {
      const long double p = std::pow(static_cast<long double>(m), -exponent);
      z += p;
      m1 += p * m;
      m2 += p * m * m;
    }
    const double mean = static_cast<double>(m1 / z);
    const double var = static_cast<double>(m2 / z) - mean * mean;
    const std::size_t n = 100000;

    CHECK(oracle::DiscretePowerLawSampler(exponent, xmin, cap).mean() == doctest::Approx(mean).epsilon(1e-9));

    const auto x = oracle::gen_discrete_powerlaw(n, exponent, xmin, 2024, cap);
    double sum = 0;
    for (auto v : x) sum += static_cast<double>(std::min(v, cap));
    const double se = std::sqrt(var / static_cast<double>(n));
    CHECK(std::abs(sum / static_cast<double>(n) - mean) < 3 * se);
  }

  TEST_CASE("jump walk steps are power-law sized") {
    const auto w = oracle::gen_jump_walk(5000, 2.0, 3, 11);
    REQUIRE(w.size() == 5000);
    for (std::size_t i = 1; i < w.size(); ++i) CHECK(std::abs(w[i].value - w[i - 1].value) >= 3);
  }
}
