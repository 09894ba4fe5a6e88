// Copyright 2026 The kvote Authors.
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

#ifndef KVOTE_RNG_HPP
#define KVOTE_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace kvote {

using Rng = std::mt19937_64;

// splitmix64 finalizer; good avalanche for seed derivation.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stable combination of a master seed with structural indices. Every
/// unit of parallel work derives its own seed through this, so results
/// never depend on worker scheduling.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x4b564f5445u;  // arbitrary fixed basis
  for (std::uint64_t p : parts) h = mix64(h ^ p);
  return h;
}

/// m distinct indices drawn uniformly from [0, n), in ascending order.
/// Partial Fisher-Yates over an index array, then sort.
std::vector<std::int64_t> sample_without_replacement(std::int64_t n, std::int64_t m, Rng& rng);

}  // namespace kvote

#endif  // KVOTE_RNG_HPP
