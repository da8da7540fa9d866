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

#ifndef SEGCTX_METRICS_HPP
#define SEGCTX_METRICS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace segctx {

/// Detection outcome of one true changepoint; `delay` is empty when missed.
struct DetectionResult {
  std::int64_t changepoint = 0;
  std::optional<std::int64_t> delay;
};

/// Steps from each true segment start (other than step 1) until the MAP
/// runlength first drops to `reset_threshold` or below.
///
/// `segment_starts` are the 1-based starts of all segments in order;
/// `map_runlength[t - 1]` is the MAP runlength after step t. The search for
/// a boundary stops at the end of its segment, and such cases are missed.
std::vector<DetectionResult> detection_delays(std::span<const std::int64_t> segment_starts,
                                              std::span<const std::int64_t> map_runlength,
                                              std::int64_t reset_threshold = 3);

struct EpisodeSummary {
  std::int64_t episode = 0;
  double total_reward = 0.0;
  std::int64_t steps = 0;
  std::int64_t num_true_changepoints = 0;
  std::optional<double> mean_detection_delay;
  std::optional<std::int64_t> missed_changepoints;
  std::optional<double> mean_belief_mass_on_truth;
  std::optional<double> mean_belief_error;
};

struct MeanWithError {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t n = 0;
};

MeanWithError mean_with_error(std::span<const double> values);

}  // namespace segctx

#endif  // SEGCTX_METRICS_HPP
