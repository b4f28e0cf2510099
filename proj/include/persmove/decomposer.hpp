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
#include <span>
#include <vector>

#include "persmove/types.hpp"

namespace persmove {

/// Streaming extraction of persistent pairs.
///
/// Samples are pushed in time order. The decomposer keeps a stack of
/// alternating extrema (the top structure) and pops the last two entries as
/// a persistent pair as soon as the pending sample and the extremum before
/// them both enclose the swing between them. Each extremum enters and leaves
/// the stack at most once, so n pushes cost O(n) in total.
///
/// Ties are resolved so that the earlier of two equal-valued extrema is the
/// less extreme one: a rising sample that reaches a previous maximum closes
/// it, while a later minimum must be strictly above the earlier one to be
/// paired first. Runs of equal values collapse onto their earliest time.
///
/// One instance serves one stream; it is a regular value type and may be
/// copied to snapshot the state.
class Decomposer {
 public:
  Decomposer() = default;

  /// Feeds one sample. Returns the pairs decided by this sample in the order
  /// they were detected; the view is valid until the next call to push().
  /// Throws InputError if `s.time` is earlier than the previous sample.
  std::span<const PersistentPair> push(Sample s);

  /// Snapshot of everything seen so far. The pending sample is appended to
  /// the top structure as a provisional extremum; nothing is force-paired.
  [[nodiscard]] Decomposition finish() const&;

  /// As above, but moves the accumulated pairs out instead of copying them.
  [[nodiscard]] Decomposition finish() &&;

  [[nodiscard]] const std::vector<PersistentPair>& pairs() const { return pairs_; }

  /// Current top structure including the unclassified pending sample.
  [[nodiscard]] TopStructure top() const;

  [[nodiscard]] Ticks total_variation() const { return tv_total_; }
  [[nodiscard]] std::size_t samples_seen() const { return samples_seen_; }

  /// Pre-sizes the pair sink; a series of n samples yields at most n / 2 pairs.
  void reserve(std::size_t samples) { pairs_.reserve(samples / 2); }

  /// Drops accumulated pairs (the sink) without touching the top structure.
  /// Useful for unbounded streams that only consume push() results.
  void clear_pairs() { pairs_.clear(); }

 private:
  void collapse();
  void close_top(Decomposition& out) const;

  std::vector<Extremum> top_;
  std::vector<PersistentPair> pairs_;
  Sample held_{};
  TimeNs last_time_ = 0;
  Ticks tv_total_ = 0;
  std::size_t samples_seen_ = 0;
  int direction_ = 0;
};

/// Convenience: push every sample of `series` and finish.
Decomposition decompose(std::span<const Sample> series);

/// Sum of absolute successive differences; zero for fewer than two samples.
Ticks total_variation(std::span<const Sample> series);

/// Total variation of an extremum sequence (e.g. a top structure).
Ticks total_variation(std::span<const Extremum> extrema);

}  // namespace persmove
