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

#include <vector>

#include "persmove/decomposer.hpp"
#include "persmove/error.hpp"
#include "persmove/oracle.hpp"
#include "persmove/spectrum.hpp"

using namespace persmove;

TEST_SUITE("spectrum") {
  TEST_CASE("histogram counts sizes exactly") {
    CHECK(histogram(std::span<const PersistentPair>{}).empty());
    CHECK(histogram(std::span<const PersistentPair>{}).total_pairs() == 0);

    std::vector<PersistentPair> pairs;
    for (Ticks s : {2, 2, 2, 4}) {
      PersistentPair p;
      p.max_ext.value = s;
      p.size = s;
      pairs.push_back(p);
    }
    const SizeHistogram h = histogram(pairs);
    CHECK(h.entries() == std::map<Ticks, std::int64_t>{{2, 3}, {4, 1}});
    CHECK(h.total_pairs() == 4);
    CHECK(h.sizes() == std::vector<Ticks>{2, 2, 2, 4});
  }

  TEST_CASE("spectrum of {2:3, 4:1}") {
    SizeHistogram h;
    h.add(2, 3);
    h.add(4);
    const Spectrum s = spectrum(h);
    REQUIRE(s.size() == 2);
    CHECK(s[0] == SpectrumPoint{2, 3, 12});
    CHECK(s[1] == SpectrumPoint{4, 1, 8});
    CHECK(spectrum_area(s) == 20);
    CHECK(spectrum(SizeHistogram{}).empty());
  }

  TEST_CASE("invalid sizes and counts are rejected") {
    SizeHistogram h;
    CHECK_THROWS_AS(h.add(0), InvalidArgument);
    CHECK_THROWS_AS(h.add(3, 0), InvalidArgument);
    const std::vector<Ticks> bad{1, -2};
    CHECK_THROWS_AS(histogram_of_sizes(bad), InvalidArgument);
  }

  TEST_CASE("area equals the persistent part of the total variation") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      oracle::StepDistribution steps = oracle::StepDistribution::gaussian_steps(2.0);
      steps.zero_probability = 0.2;
      const auto w = oracle::gen_random_walk(3000, steps, seed);
      const Decomposition d = decompose(w);
      CHECK(spectrum_area(spectrum(histogram(d.pairs))) == d.tv_total - d.tv_top);
    }
  }

  TEST_CASE("sizes seen once lie on S = 2m") {
    const auto w = oracle::gen_jump_walk(5000, 1.8, 1, 6);
    const Spectrum s = spectrum(histogram(decompose(w).pairs));
    std::size_t singletons = 0;
    for (const SpectrumPoint& p : s) {
      CHECK(p.contribution == 2 * p.count * p.size);
      if (p.count == 1) {
        ++singletons;
        CHECK(p.contribution == 2 * p.size);
      }
    }
    CHECK(singletons > 0);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i - 1].size < s[i].size);
  }
}
