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

#ifndef SEGCTX_TRACE_IO_HPP
#define SEGCTX_TRACE_IO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "segctx/episode.hpp"
#include "segctx/metrics.hpp"
#include "segctx/segment_inference.hpp"

namespace segctx {

/// One environment step of an experiment run.
///
/// Belief fields describe the belief the agent acted on at this step (built
/// from transitions 1..t-1); `inferred_runlength_map` and
/// `top_k_runlength_posterior` are taken after transition t.
struct StepTrace {
  std::int64_t episode = 0;
  std::int64_t t = 0;
  std::vector<double> state;
  double action = 0.0;
  double reward = 0.0;
  std::vector<double> next_state;
  std::optional<std::vector<double>> obs_context;
  std::int64_t true_runlength = 0;
  std::optional<std::int64_t> inferred_runlength_map;
  std::optional<double> belief_mass_on_truth;
  std::optional<double> belief_mean;
  std::optional<double> belief_std;
  std::vector<RunLengthProbability> top_k_runlength_posterior;
  /// Full categorical belief for grids of at most 64 cells.
  std::optional<std::vector<double>> belief_full;
  /// (cell, probability) of the 8 most likely cells for larger grids.
  std::vector<std::pair<std::int32_t, double>> belief_top;
};

inline constexpr std::size_t kTraceTopK = 8;
inline constexpr std::int32_t kFullBeliefMaxCells = 64;

/// The k most probable runlengths, most probable first (ties: longer run first).
std::vector<RunLengthProbability> top_k(std::vector<RunLengthProbability> posterior,
                                        std::size_t k = kTraceTopK);

std::string to_jsonl(const StepTrace& trace);
StepTrace step_trace_from_jsonl(const std::string& line);

/// Trajectory file: one transition per line, tagged with its episode.
struct TrajectoryLine {
  std::int64_t episode = 0;
  TransitionRecord record;
};

std::string to_jsonl(const TrajectoryLine& line);
TrajectoryLine trajectory_from_jsonl(const std::string& line);
std::vector<TrajectoryLine> read_trajectory(const std::filesystem::path& path);

/// Offline inference output: one line per step.
struct PosteriorLine {
  std::int64_t episode = 0;
  std::int64_t t = 0;
  std::int64_t map_runlength = 1;
  std::vector<RunLengthProbability> top_k_runlength_posterior;
  std::vector<double> belief_mean;
  std::vector<double> belief_std;
};

std::string to_jsonl(const PosteriorLine& line);

inline constexpr const char* kSummaryHeader =
    "episode,total_reward,steps,num_true_changepoints,mean_detection_delay,missed_changepoints,"
    "mean_belief_mass_on_truth,mean_belief_error";

/// CSV with header; undefined optional fields are written as empty cells.
void write_summaries(std::ostream& out, const std::vector<EpisodeSummary>& summaries);
std::vector<EpisodeSummary> read_summaries(std::istream& in);

/// Opens `path` for writing or throws IoError.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace segctx

#endif  // SEGCTX_TRACE_IO_HPP
