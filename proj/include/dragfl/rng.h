// Copyright 2026 The dragfl Authors
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

#ifndef DRAGFL_RNG_H_
#define DRAGFL_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dragfl {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream from a seed and a tuple of coordinates
// (e.g. client id and round), so that results do not depend on the order in
// which streams are created or consumed.
inline Rng MakeStream(uint64_t seed, std::initializer_list<uint64_t> coords) {
  uint64_t h = Mix64(seed);
  for (uint64_t c : coords) h = Mix64(h ^ Mix64(c + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<uint32_t>(h), static_cast<uint32_t>(h >> 32)};
  return Rng(seq);
}

// Stream tags keep the server-side streams apart from per-client ones.
enum StreamTag : uint64_t {
  kTagClient = 1,
  kTagParticipants = 2,
  kTagAttackers = 3,
  kTagAttackScale = 4,
  kTagRoot = 5,
  kTagData = 6,
  kTagPartition = 7,
  kTagInit = 8,
};

}  // namespace dragfl

#endif  // DRAGFL_RNG_H_
