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

#include "dragfl/attacks.h"

#include <algorithm>
#include <cmath>

#include "dragfl/errors.h"

namespace dragfl {

void AttackConfig::Validate() const {
  if (num_attackers < 0) throw ConfigError("attack.num_attackers", "must be >= 0");
  if (mode == ScalarMode::kGaussian && !(variance > 0.0)) {
    throw ConfigError("attack.variance", "must be > 0");
  }
  if (mode == ScalarMode::kFixed && !std::isfinite(fixed_scale)) {
    throw ConfigError("attack.p", "must be finite");
  }
}

std::vector<int> SelectAttackers(std::span<const int> participants,
                                 int num_attackers, Rng& rng) {
  if (num_attackers < 0 || static_cast<std::size_t>(num_attackers) > participants.size()) {
    throw InvalidArgumentError("SelectAttackers: need 0 <= A <= |participants|");
  }
  std::vector<int> pool(participants.begin(), participants.end());
  for (int i = 0; i < num_attackers; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(num_attackers);
  std::sort(pool.begin(), pool.end());
  return pool;
}

double DrawAttackScale(const AttackConfig& cfg, Rng& rng) {
  if (cfg.mode == AttackConfig::ScalarMode::kFixed) return cfg.fixed_scale;
  std::normal_distribution<double> p(0.0, std::sqrt(cfg.variance));
  return p(rng);
}

AttackedUpdate ApplyAttack(const ParamVector& g, const AttackConfig& cfg,
                           Rng& rng) {
  const double p = DrawAttackScale(cfg, rng);
  return {Scale(g, p), p};
}

}  // namespace dragfl
