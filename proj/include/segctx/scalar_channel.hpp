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

#ifndef SEGCTX_SCALAR_CHANNEL_HPP
#define SEGCTX_SCALAR_CHANNEL_HPP

#include <cstdint>
#include <random>

#include "segctx/episode.hpp"
#include "segctx/hazard.hpp"

namespace segctx::scalar {

/// Passive environment emitting y_t ~ N(c_t, obs_std^2), with c piecewise
/// constant. Segment means are drawn from N(prior_mean, prior_std^2); with
/// min_jump > 0 a draw closer than min_jump * obs_std to the previous
/// segment's mean is rejected, which plants a detectable change.
struct ScalarChannelConfig {
  double prior_mean = 0.0;
  double prior_std = 3.0;
  double obs_std = 1.0;
  double min_jump = 0.0;
  HazardSpec hazard = ConstantHazard{1.0 / 80.0};
  std::int64_t horizon = 400;
};

void validate(const ScalarChannelConfig& cfg);

EpisodeScript<double> sample_script(const ScalarChannelConfig& cfg, std::mt19937_64& rng);

/// Draws one segment mean honouring min_jump relative to `previous`.
double sample_mean(const ScalarChannelConfig& cfg, const double* previous, std::mt19937_64& rng);

/// Observation at step t; state_next = {y}, reward 0, obs_context = {c} in training.
TransitionRecord scalar_step(std::int64_t t, double prev_y, double mean,
                             const ScalarChannelConfig& cfg, std::mt19937_64& rng,
                             Visibility visibility, std::int64_t true_runlength);

}  // namespace segctx::scalar

#endif  // SEGCTX_SCALAR_CHANNEL_HPP
