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

#ifndef SEGCTX_COMPARE_HPP
#define SEGCTX_COMPARE_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "segctx/errors.hpp"
#include "segctx/metrics.hpp"

namespace segctx {

/// Raised when runs did not face the same sequence of worlds.
class MisalignedRunsError : public ConfigError {
 public:
  explicit MisalignedRunsError(const std::string& what) : ConfigError(what) {}
};

struct RunReport {
  std::filesystem::path dir;
  std::string agent;
  std::string inference_hazard;
  MeanWithError total_reward;
  std::optional<double> mean_detection_delay;
  std::optional<double> mean_belief_mass_on_truth;
  std::optional<double> mean_belief_error;
  /// Mean total reward minus that of the first run.
  double reward_difference = 0.0;
  /// Fraction of steps whose MAP runlength equals the first run's; empty
  /// unless both runs carry inferred runlengths.
  std::optional<double> map_agreement;
};

struct CompareReport {
  std::vector<RunReport> runs;
};

/// Loads at least two run directories produced with the same environment,
/// horizon, episode count and master seed; throws MisalignedRunsError otherwise.
CompareReport compare_runs(std::span<const std::filesystem::path> dirs);

std::string format_report(const CompareReport& report);

}  // namespace segctx

#endif  // SEGCTX_COMPARE_HPP
