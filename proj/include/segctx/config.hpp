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

#ifndef SEGCTX_CONFIG_HPP
#define SEGCTX_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "segctx/bandwidth.hpp"
#include "segctx/belief_agent.hpp"
#include "segctx/context_models.hpp"
#include "segctx/grid_world.hpp"
#include "segctx/q_table.hpp"
#include "segctx/scalar_channel.hpp"
#include "segctx/segment_inference.hpp"

namespace segctx {

enum class EnvKind { kGrid, kBandwidth, kScalar };

enum class PolicyKind {
  kGreedy,     // grid: walk to the highest-belief cell
  kQLearning,  // grid: tabular Q over the discretized augmented state
  kBandwidth,  // bandwidth: mean - kappa * std
  kRandom,     // uniform random actions
  kPassive,    // scalar channel: no action
};

std::string_view to_string(EnvKind kind);
std::string_view to_string(PolicyKind kind);

struct AgentSection {
  AgentKind kind = AgentKind::kSegmented;
  BeliefMode belief = BeliefMode::kMap;
  PolicyKind policy = PolicyKind::kGreedy;
  QLearningParams q;
  std::int64_t train_episodes = 0;
  double kappa = 0.0;
};

struct RunSection {
  std::int64_t episodes = 1;
  std::int64_t horizon = 400;
  std::uint64_t seed = 0;
  std::string output = "out";
  std::int64_t reset_threshold = 3;
};

/// Everything needed to reproduce one experiment.
///
/// Only the environment struct selected by `env` is meaningful. The
/// inference hazard may differ from the environment's true hazard.
struct ExperimentConfig {
  EnvKind env = EnvKind::kGrid;
  grid::GridWorldConfig grid;
  bandwidth::BandwidthConfig bandwidth;
  scalar::ScalarChannelConfig scalar;

  InferenceConfig inference;
  /// p(x = goal | goal) for the categorical model's observable-context term.
  double context_accuracy = 0.9;
  /// Std of the observable-context reading for Gaussian models.
  double context_obs_std = 0.5;

  AgentSection agent;
  RunSection run;

  [[nodiscard]] const HazardSpec& env_hazard() const;
};

/// Parses the INI-style config. Unknown sections or keys are ConfigErrors.
///
///   [environment] kind = grid | bandwidth | scalar, hazard = constant | gaussian,
///                 hazard_rate | hazard_mean + hazard_std, plus per-kind keys
///   [inference]   max_hypotheses, visibility, belief, hazard..., context_accuracy,
///                 context_obs_std
///   [agent]       kind, policy, kappa, alpha, gamma, epsilon_start, epsilon_end,
///                 train_episodes
///   [run]         episodes, horizon, seed, output, reset_threshold
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

void validate(const ExperimentConfig& cfg);

/// Canonical text of the environment section and horizon; two runs with the
/// same fingerprint and master seed face the same sequence of worlds.
std::string environment_fingerprint(const ExperimentConfig& cfg);

CategoricalGoalModel make_categorical_model(const ExperimentConfig& cfg);
GaussianMeanModel make_gaussian_model(const ExperimentConfig& cfg);

}  // namespace segctx

#endif  // SEGCTX_CONFIG_HPP
