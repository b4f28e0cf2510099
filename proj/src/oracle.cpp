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

#include "persmove/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>

#include "persmove/error.hpp"

namespace persmove::oracle {

std::vector<Extremum> extremum_sequence(std::span<const Sample> series) {
  std::vector<Sample> flat;
  flat.reserve(series.size());
  for (const Sample& s : series) {
    if (flat.empty() || flat.back().value != s.value) flat.push_back(s);
  }

  std::vector<Extremum> out;
  const std::size_t n = flat.size();
  if (n == 0) return out;
  if (n == 1) {
    out.push_back({flat[0].time, flat[0].value, ExtremumKind::minimum});
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const bool is_first = i == 0;
    const bool is_last = i + 1 == n;
    ExtremumKind kind;
    if (is_first) {
      kind = flat[1].value > flat[0].value ? ExtremumKind::minimum : ExtremumKind::maximum;
    } else if (is_last) {
      kind = flat[i - 1].value < flat[i].value ? ExtremumKind::maximum : ExtremumKind::minimum;
    } else {
      const bool above_left = flat[i].value > flat[i - 1].value;
      const bool above_right = flat[i].value > flat[i + 1].value;
      if (above_left != above_right) continue;  // monotone interior point
      kind = above_left ? ExtremumKind::maximum : ExtremumKind::minimum;
    }
    out.push_back({flat[i].time, flat[i].value, kind});
  }
  return out;
}

namespace {

struct Component {
  std::size_t best;  // index of the lowest minimum
  bool touches_start;
  bool touches_end;
};

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void attach(std::size_t child_root, std::size_t root) { parent_[child_root] = root; }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

Decomposition level_sweep_pairs(std::span<const Sample> series) {
  Decomposition out;
  for (std::size_t i = 1; i < series.size(); ++i) {
    out.tv_total += std::llabs(series[i].value - series[i - 1].value);
  }

  const std::vector<Extremum> ext = extremum_sequence(series);
  const std::size_t n = ext.size();
  if (n == 0) return out;

  // Sweep order. Among equal values the earlier minimum is treated as higher
  // and the earlier maximum as lower, so earlier extrema pair first.
  auto minimum_below = [&](std::size_t i, std::size_t j) {
    if (ext[i].value != ext[j].value) return ext[i].value < ext[j].value;
    return i > j;
  };
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (ext[i].value != ext[j].value) return ext[i].value < ext[j].value;
    // Minima and maxima of equal value are never neighbours, so their
    // relative order is irrelevant; keep it fixed for determinism.
    if (ext[i].kind != ext[j].kind) return ext[i].kind == ExtremumKind::minimum;
    return ext[i].kind == ExtremumKind::minimum ? i > j : i < j;
  });

  DisjointSet sets(n);
  std::vector<Component> comp(n);
  std::vector<char> active(n, 0);
  std::vector<char> paired(n, 0);

  for (const std::size_t p : order) {
    active[p] = 1;
    if (ext[p].kind == ExtremumKind::minimum) {
      comp[p] = {p, p == 0, p + 1 == n};
      continue;
    }
    const bool has_left = p > 0 && active[p - 1];
    const bool has_right = p + 1 < n && active[p + 1];
    if (has_left && has_right) {
      const std::size_t lroot = sets.find(p - 1);
      const std::size_t rroot = sets.find(p + 1);
      Component& l = comp[lroot];
      Component& r = comp[rroot];
      const bool left_dies = minimum_below(r.best, l.best);
      const Component& dying = left_dies ? l : r;
      if (!dying.touches_start && !dying.touches_end) {
        PersistentPair pair{ext[dying.best], ext[p], ext[p].value - ext[dying.best].value};
        out.pairs.push_back(pair);
        paired[dying.best] = 1;
        paired[p] = 1;
      }
      Component merged{left_dies ? r.best : l.best, l.touches_start || r.touches_start,
                       l.touches_end || r.touches_end};
      sets.attach(rroot, lroot);
      sets.attach(p, lroot);
      comp[lroot] = merged;
    } else if (has_left || has_right) {
      // Boundary maximum: joins its only neighbour.
      const std::size_t root = sets.find(has_left ? p - 1 : p + 1);
      sets.attach(p, root);
      if (p == 0) comp[root].touches_start = true;
      if (p + 1 == n) comp[root].touches_end = true;
    } else {
      comp[p] = {p, p == 0, p + 1 == n};
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!paired[i]) out.top.extrema.push_back(ext[i]);
  }
  for (std::size_t i = 1; i < out.top.extrema.size(); ++i) {
    out.tv_top += std::llabs(out.top.extrema[i].value - out.top.extrema[i - 1].value);
  }
  return out;
}

std::vector<Sample> gen_random_walk(std::size_t n, const StepDistribution& steps,
                                    std::uint64_t seed, WalkTiming timing) {
  std::vector<Sample> out;
  out.reserve(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, steps.sigma);
  std::bernoulli_distribution zero(steps.zero_probability);

  Ticks v = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      Ticks step = 0;
      if (steps.kind == StepDistribution::Kind::unit) {
        step = (rng() >> 63) != 0 ? 1 : -1;
      } else {
        step = static_cast<Ticks>(std::llround(gauss(rng)));
      }
      if (steps.zero_probability > 0.0 && zero(rng)) step = 0;
      v += step;
    }
    out.push_back({timing.start + static_cast<TimeNs>(i) * timing.spacing, v});
  }
  return out;
}

DiscretePowerLawSampler::DiscretePowerLawSampler(double exponent, std::int64_t xmin,
                                                 std::int64_t cap)
    : exponent_(exponent), xmin_(xmin), cap_(cap) {
  if (!(exponent > 1.0)) throw InvalidArgument("power-law exponent must exceed 1");
  if (xmin < 1) throw InvalidArgument("power-law xmin must be at least 1");
  if (cap < xmin) throw InvalidArgument("power-law cap must be at least xmin");

  const auto count = static_cast<std::size_t>(cap - xmin + 1);
  cdf_.resize(count);
  long double total = 0.0L;
  long double first_moment = 0.0L;
  for (std::size_t k = 0; k < count; ++k) {
    const long double m = static_cast<long double>(xmin + static_cast<std::int64_t>(k));
    const long double w = std::pow(m, -static_cast<long double>(exponent));
    total += w;
    first_moment += w * m;
    cdf_[k] = static_cast<double>(total);
  }
  for (double& c : cdf_) c = static_cast<double>(c / total);
  cdf_.back() = 1.0;
  mean_ = static_cast<double>(first_moment / total);
}

std::int64_t DiscretePowerLawSampler::draw(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto k = std::min<std::ptrdiff_t>(it - cdf_.begin(),
                                          static_cast<std::ptrdiff_t>(cdf_.size()) - 1);
  return xmin_ + static_cast<std::int64_t>(k);
}

std::vector<std::int64_t> gen_discrete_powerlaw(std::size_t n, double exponent,
                                                std::int64_t xmin, std::uint64_t seed,
                                                std::int64_t cap) {
  const DiscretePowerLawSampler sampler(exponent, xmin, cap);
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> out(n);
  for (auto& x : out) x = sampler(rng);
  return out;
}

std::vector<Sample> gen_jump_walk(std::size_t n, double exponent, std::int64_t xmin,
                                  std::uint64_t seed, WalkTiming timing,
                                  Ticks start_value) {
  const DiscretePowerLawSampler sampler(exponent, xmin);
  std::mt19937_64 rng(seed);
  std::vector<Sample> out;
  out.reserve(n);
  Ticks v = start_value;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      const bool up = (rng() >> 63) != 0;
      const std::int64_t jump = sampler(rng);
      v += up ? jump : -jump;
    }
    out.push_back({timing.start + static_cast<TimeNs>(i) * timing.spacing, v});
  }
  return out;
}

}  // namespace persmove::oracle
