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

#include "persmove/decomposer.hpp"

#include <cstdlib>
#include <string>
#include <utility>

#include "persmove/error.hpp"

namespace persmove {

std::span<const PersistentPair> Decomposer::push(Sample s) {
  if (samples_seen_ > 0 && s.time < last_time_) {
    throw InputError("sample time " + std::to_string(s.time) +
                     " precedes previous time " + std::to_string(last_time_));
  }
  last_time_ = s.time;
  ++samples_seen_;

  if (samples_seen_ == 1) {
    held_ = s;
    return {};
  }
  // Plateau: keep the earliest time of the run.
  if (s.value == held_.value) return {};

  const int d = s.value > held_.value ? 1 : -1;
  tv_total_ += std::llabs(s.value - held_.value);

  if (d != direction_) {
    // The held sample is a turning point.
    top_.push_back({held_.time, held_.value,
                    d > 0 ? ExtremumKind::minimum : ExtremumKind::maximum});
    direction_ = d;
  }
  held_ = s;

  const std::size_t first_new = pairs_.size();
  collapse();
  return std::span<const PersistentPair>(pairs_).subspan(first_new);
}

void Decomposer::collapse() {
  // top_ = [..., a, b, c] and the pending value x moves away from c.
  // The swing b-c is decided once x reaches b and a lies strictly outside c.
  while (top_.size() >= 3) {
    const std::size_t n = top_.size();
    const Extremum& a = top_[n - 3];
    const Extremum& b = top_[n - 2];
    const Extremum& c = top_[n - 1];
    const Ticks x = held_.value;

    const bool decided = direction_ > 0 ? (x >= b.value && c.value > a.value)
                                        : (x <= b.value && c.value < a.value);
    if (!decided) break;

    PersistentPair p;
    if (b.kind == ExtremumKind::maximum) {
      p.max_ext = b;
      p.min_ext = c;
    } else {
      p.min_ext = b;
      p.max_ext = c;
    }
    p.size = p.max_ext.value - p.min_ext.value;
    pairs_.push_back(p);
    top_.resize(n - 2);
  }
}

TopStructure Decomposer::top() const {
  TopStructure t;
  t.extrema = top_;
  if (samples_seen_ > 0) t.pending = held_;
  return t;
}

void Decomposer::close_top(Decomposition& out) const {
  out.top.extrema = top_;
  if (samples_seen_ > 0) {
    const ExtremumKind kind =
        direction_ > 0 ? ExtremumKind::maximum : ExtremumKind::minimum;
    out.top.extrema.push_back({held_.time, held_.value, kind});
  }
  out.tv_total = tv_total_;
  out.tv_top = persmove::total_variation(std::span<const Extremum>(out.top.extrema));
}

Decomposition Decomposer::finish() const& {
  Decomposition out;
  out.pairs = pairs_;
  close_top(out);
  return out;
}

Decomposition Decomposer::finish() && {
  Decomposition out;
  close_top(out);
  out.pairs = std::move(pairs_);
  return out;
}

Decomposition decompose(std::span<const Sample> series) {
  Decomposer d;
  d.reserve(series.size());
  for (const Sample& s : series) d.push(s);
  return std::move(d).finish();
}

Ticks total_variation(std::span<const Sample> series) {
  Ticks tv = 0;
  for (std::size_t i = 1; i < series.size(); ++i) {
    tv += std::llabs(series[i].value - series[i - 1].value);
  }
  return tv;
}

Ticks total_variation(std::span<const Extremum> extrema) {
  Ticks tv = 0;
  for (std::size_t i = 1; i < extrema.size(); ++i) {
    tv += std::llabs(extrema[i].value - extrema[i - 1].value);
  }
  return tv;
}

}  // namespace persmove
