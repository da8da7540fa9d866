// Copyright 2026 The segctx Authors.
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

#include "segctx/scalar_channel.hpp"

#include <cmath>

#include "segctx/errors.hpp"

namespace segctx::scalar {

void validate(const ScalarChannelConfig& cfg) {
  if (!(cfg.prior_std > 0.0) || !(cfg.obs_std > 0.0)) {
    throw ConfigError("scalar channel std values must be > 0");
  }
  if (!(cfg.min_jump >= 0.0)) {
    throw ConfigError("min_jump must be >= 0");
  }
  // Rejection sampling needs a reasonable acceptance rate.
  if (cfg.min_jump * cfg.obs_std > 4.0 * cfg.prior_std) {
    throw ConfigError("min_jump too large relative to prior_std");
  }
  if (cfg.horizon < 1) {
    throw ConfigError("horizon must be >= 1");
  }
  segctx::validate(cfg.hazard);
}

double sample_mean(const ScalarChannelConfig& cfg, const double* previous, std::mt19937_64& rng) {
  std::normal_distribution<double> prior(cfg.prior_mean, cfg.prior_std);
  double c = prior(rng);
  if (previous != nullptr) {
    while (std::abs(c - *previous) < cfg.min_jump * cfg.obs_std) {
      c = prior(rng);
    }
  }
  return c;
}

EpisodeScript<double> sample_script(const ScalarChannelConfig& cfg, std::mt19937_64& rng) {
  validate(cfg);
  return sample_episode_script<double>(
      cfg.hazard, [&](std::mt19937_64& g, const double* prev) { return sample_mean(cfg, prev, g); },
      cfg.horizon, rng);
}

TransitionRecord scalar_step(std::int64_t t, double prev_y, double mean,
                             const ScalarChannelConfig& cfg, std::mt19937_64& rng,
                             Visibility visibility, std::int64_t true_runlength) {
  std::normal_distribution<double> noise(0.0, cfg.obs_std);
  TransitionRecord rec;
  rec.t = t;
  rec.state_prev = {prev_y};
  rec.state_next = {mean + noise(rng)};
  if (visibility == Visibility::kTraining) {
    rec.obs_context = std::vector<double>{mean};
  }
  rec.true_runlength = true_runlength;
  return rec;
}

}  // namespace segctx::scalar
