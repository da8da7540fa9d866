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

#include "segctx/bandwidth.hpp"

#include <algorithm>
#include <cmath>

#include "segctx/errors.hpp"

namespace segctx::bandwidth {

std::vector<double> ChannelStats::to_vector() const {
  return {send_rate, receive_rate, smoothed_receive_rate, loss, delay, capacity_probe};
}

void validate(const BandwidthConfig& cfg) {
  if (!(cfg.capacity_min > 0.0 && cfg.capacity_min <= cfg.capacity_max)) {
    throw ConfigError("capacity range needs 0 < capacity_min <= capacity_max");
  }
  if (!(cfg.rtt_min > 0.0 && cfg.rtt_min <= cfg.rtt_max)) {
    throw ConfigError("rtt range needs 0 < rtt_min <= rtt_max");
  }
  if (!(cfg.obs_noise_std >= 0.0) || !(cfg.probe_noise_std >= 0.0)) {
    throw ConfigError("noise levels must be >= 0");
  }
  if (!(cfg.queue_coeff >= 0.0)) {
    throw ConfigError("queue_coeff must be >= 0");
  }
  if (!(cfg.smoothing >= 0.0 && cfg.smoothing < 1.0)) {
    throw ConfigError("smoothing must lie in [0, 1)");
  }
  if (cfg.horizon < 1) {
    throw ConfigError("horizon must be >= 1");
  }
  segctx::validate(cfg.hazard);
}

ChannelCondition sample_condition(const BandwidthConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> cap(cfg.capacity_min, cfg.capacity_max);
  std::uniform_real_distribution<double> rtt(cfg.rtt_min, cfg.rtt_max);
  ChannelCondition c;
  c.capacity = cfg.capacity_min == cfg.capacity_max ? cfg.capacity_min : cap(rng);
  c.rtt = cfg.rtt_min == cfg.rtt_max ? cfg.rtt_min : rtt(rng);
  return c;
}

EpisodeScript<ChannelCondition> sample_script(const BandwidthConfig& cfg, std::mt19937_64& rng) {
  validate(cfg);
  return sample_episode_script<ChannelCondition>(
      cfg.hazard,
      [&](std::mt19937_64& g, const ChannelCondition*) { return sample_condition(cfg, g); },
      cfg.horizon, rng);
}

double reward(double receive_rate, double delay, double loss, const ChannelCondition& cond) {
  return 2.0 * receive_rate / cond.capacity - (delay - cond.rtt / 2.0) - loss - 1.0;
}

BandwidthStep bandwidth_step(const ChannelStats& state, double rate, const ChannelCondition& cond,
                             const BandwidthConfig& cfg, std::mt19937_64& rng,
                             Visibility visibility) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw DomainError("send rate must be finite and >= 0");
  }
  std::normal_distribution<double> unit(0.0, 1.0);
  // Both noise draws happen every step so the stream stays aligned across policies.
  const double eps = cfg.obs_noise_std * unit(rng);
  const double probe_eps = cfg.probe_noise_std * unit(rng);

  BandwidthStep out;
  ChannelStats& s = out.next;
  s.send_rate = rate;
  s.receive_rate = std::clamp(std::min(rate, cond.capacity) * (1.0 + eps), 0.0, cond.capacity);
  s.loss = rate > 0.0 ? std::max(0.0, (rate - cond.capacity) / rate) : 0.0;
  s.delay = cond.rtt / 2.0 + cfg.queue_coeff * (rate / cond.capacity);
  s.smoothed_receive_rate =
      cfg.smoothing * state.smoothed_receive_rate + (1.0 - cfg.smoothing) * s.receive_rate;
  s.capacity_probe = cond.capacity + probe_eps;
  out.reward = reward(s.receive_rate, s.delay, s.loss, cond);
  if (visibility == Visibility::kTraining) {
    out.obs_context = cond;
  }
  return out;
}

TransitionRecord make_record(std::int64_t t, const ChannelStats& prev, double rate,
                             const BandwidthStep& step, std::int64_t true_runlength) {
  TransitionRecord rec;
  rec.t = t;
  rec.state_prev = prev.to_vector();
  rec.action = rate;
  rec.reward = step.reward;
  rec.state_next = step.next.to_vector();
  if (step.obs_context) {
    rec.obs_context = std::vector<double>{step.obs_context->capacity, step.obs_context->rtt};
  }
  rec.true_runlength = true_runlength;
  return rec;
}

}  // namespace segctx::bandwidth
