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

#ifndef DRAGFL_ATTACKS_H_
#define DRAGFL_ATTACKS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dragfl/rng.h"
#include "dragfl/vecmath.h"

namespace dragfl {

// Malicious clients multiply their update by a scalar p before sending it.
struct AttackConfig {
  enum class ScalarMode { kFixed, kGaussian };

  int num_attackers = 0;
  ScalarMode mode = ScalarMode::kGaussian;
  double fixed_scale = -1.0;  // kFixed
  double variance = 3.0;      // kGaussian: p ~ Normal(0, variance)
  uint64_t seed = 0;
  // Pick the attacker identities once from all clients (true) or afresh
  // from each round's participants (false).
  bool fixed_identities = true;
  // Draw a new p for every (attacker, round) pair (true) or one p per
  // attacker for the whole run (false).
  bool redraw_scale = true;

  void Validate() const;

  friend bool operator==(const AttackConfig&, const AttackConfig&) = default;
};

// `num_attackers` distinct ids chosen uniformly without replacement,
// returned in ascending order.
std::vector<int> SelectAttackers(std::span<const int> participants,
                                 int num_attackers, Rng& rng);

double DrawAttackScale(const AttackConfig& cfg, Rng& rng);

struct AttackedUpdate {
  ParamVector g;
  double scale;
};

// Returns p * g with p drawn by DrawAttackScale.
AttackedUpdate ApplyAttack(const ParamVector& g, const AttackConfig& cfg,
                           Rng& rng);

}  // namespace dragfl

#endif  // DRAGFL_ATTACKS_H_
