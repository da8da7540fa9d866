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

#ifndef SEGCTX_EXPERIMENT_HPP
#define SEGCTX_EXPERIMENT_HPP

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "segctx/config.hpp"
#include "segctx/metrics.hpp"
#include "segctx/q_table.hpp"
#include "segctx/trace_io.hpp"

namespace segctx {

using TraceSink = std::function<void(const StepTrace&)>;

struct RunOutput {
  std::vector<EpisodeSummary> summaries;
  /// Learned table for Q-learning agents.
  std::optional<QTable> q_table;
};

/// Runs `cfg.run.episodes` evaluation episodes and streams every step to `sink`.
///
/// Episode i draws its world from episode_seed(master, i) on separate
/// script, environment and agent streams, so runs that differ only in the
/// agent face identical segment scripts. Q-learning agents first train for
/// `train_episodes` episodes on a disjoint seed stream, then act greedily
/// with a frozen table.
RunOutput run_experiment(const ExperimentConfig& cfg, const TraceSink& sink = {});

/// File names inside a run directory.
inline constexpr const char* kTraceFile = "traces.jsonl";
inline constexpr const char* kSummaryFile = "summary.csv";
inline constexpr const char* kRunInfoFile = "run.json";
inline constexpr const char* kQTableFile = "qtable.txt";

/// run_experiment writing traces.jsonl, summary.csv, run.json (and
/// qtable.txt for Q-learning) into `out_dir`, created if missing.
RunOutput run_to_directory(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Environment rollouts under a random policy (passive for the scalar
/// channel). Observable contexts are recorded under training visibility.
std::vector<TrajectoryLine> simulate(const ExperimentConfig& cfg);

/// Offline run-length inference over a recorded trajectory, one line per step.
/// Beliefs are the mixture over run lengths.
std::vector<PosteriorLine> infer_offline(const ExperimentConfig& cfg,
                                         std::span<const TrajectoryLine> trajectory);

}  // namespace segctx

#endif  // SEGCTX_EXPERIMENT_HPP
