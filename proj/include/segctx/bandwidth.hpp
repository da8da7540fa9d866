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

#ifndef SEGCTX_BANDWIDTH_HPP
#define SEGCTX_BANDWIDTH_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "segctx/episode.hpp"
#include "segctx/hazard.hpp"

namespace segctx::bandwidth {

/// Latent network condition of one segment.
struct ChannelCondition {
  double capacity = 1.0;
  double rtt = 0.1;
};

/// Per-step network statistics visible to the sender.
///
/// `capacity_probe` is a noisy bottleneck-capacity measurement (packet-pair
/// style); it is the channel's only observation that is informative about
/// the capacity while the sender stays below it.
struct ChannelStats {
  double send_rate = 0.0;
  double receive_rate = 0.0;
  double smoothed_receive_rate = 0.0;
  double loss = 0.0;
  double delay = 0.0;
  double capacity_probe = 0.0;

  [[nodiscard]] std::vector<double> to_vector() const;
};

/// Index of `capacity_probe` in ChannelStats::to_vector().
inline constexpr std::size_t kProbeIndex = 5;

struct BandwidthConfig {
  double capacity_min = 1.0;
  double capacity_max = 10.0;
  double rtt_min = 0.02;
  double rtt_max = 0.2;
  HazardSpec hazard = ConstantHazard{1.0 / 80.0};
  std::int64_t horizon = 400;
  /// Relative noise on the receive rate.
  double obs_noise_std = 0.05;
  /// Absolute noise on the capacity probe, in rate units.
  double probe_noise_std = 0.5;
  /// Queueing delay per unit utilization.
  double queue_coeff = 0.1;
  /// Weight on the previous value in the receive-rate moving average.
  double smoothing = 0.8;
};

void validate(const BandwidthConfig& cfg);

/// Uniform draw over the configured capacity and RTT ranges.
ChannelCondition sample_condition(const BandwidthConfig& cfg, std::mt19937_64& rng);

EpisodeScript<ChannelCondition> sample_script(const BandwidthConfig& cfg, std::mt19937_64& rng);

struct BandwidthStep {
  ChannelStats next;
  double reward = 0.0;
  std::optional<ChannelCondition> obs_context;
};

/// 2R/C - (D - RTT/2) - L - 1.
double reward(double receive_rate, double delay, double loss, const ChannelCondition& cond);

/// One memoryless channel step at send rate `rate`. Throws DomainError for rate < 0.
BandwidthStep bandwidth_step(const ChannelStats& state, double rate, const ChannelCondition& cond,
                             const BandwidthConfig& cfg, std::mt19937_64& rng,
                             Visibility visibility = Visibility::kDeployment);

TransitionRecord make_record(std::int64_t t, const ChannelStats& prev, double rate,
                             const BandwidthStep& step, std::int64_t true_runlength);

}  // namespace segctx::bandwidth

#endif  // SEGCTX_BANDWIDTH_HPP
