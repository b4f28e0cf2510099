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

#include "persmove/spectrum.hpp"

#include <string>

#include "persmove/error.hpp"

namespace persmove {

void SizeHistogram::add(Ticks size, std::int64_t count) {
  if (size < 1) throw InvalidArgument("movement size must be positive, got " + std::to_string(size));
  if (count < 1) throw InvalidArgument("histogram count must be positive");
  entries_[size] += count;
  total_ += count;
}

std::vector<Ticks> SizeHistogram::sizes() const {
  std::vector<Ticks> out;
  out.reserve(static_cast<std::size_t>(total_));
  for (const auto& [size, count] : entries_) out.insert(out.end(), static_cast<std::size_t>(count), size);
  return out;
}

SizeHistogram histogram(std::span<const PersistentPair> pairs) {
  SizeHistogram h;
  for (const PersistentPair& p : pairs) h.add(p.size);
  return h;
}

SizeHistogram histogram_of_sizes(std::span<const Ticks> sizes) {
  SizeHistogram h;
  for (const Ticks s : sizes) h.add(s);
  return h;
}

Spectrum spectrum(const SizeHistogram& h) {
  Spectrum out;
  out.reserve(h.entries().size());
  for (const auto& [size, count] : h.entries()) out.push_back({size, count, 2 * count * size});
  return out;
}

Ticks spectrum_area(const Spectrum& s) {
  Ticks sum = 0;
  for (const SpectrumPoint& p : s) sum += p.contribution;
  return sum;
}

}  // namespace persmove
