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

#include "segctx/belief_agent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace segctx {

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::kSegmented:
      return "segmented";
    case AgentKind::kVanilla:
      return "vanilla";
    case AgentKind::kOracle:
      return "oracle";
  }
  return "?";
}

AgentKind parse_agent_kind(std::string_view text) {
  if (text == "segmented") {
    return AgentKind::kSegmented;
  }
  if (text == "vanilla") {
    return AgentKind::kVanilla;
  }
  if (text == "oracle") {
    return AgentKind::kOracle;
  }
  throw ConfigError("unknown agent kind '" + std::string(text) + "'");
}

BeliefMode parse_belief_mode(std::string_view text) {
  if (text == "map") {
    return BeliefMode::kMap;
  }
  if (text == "mixture") {
    return BeliefMode::kMixture;
  }
  throw ConfigError("unknown belief mode '" + std::string(text) + "'");
}

namespace grid {

Cell argmax_cell(std::span<const double> belief) {
  const auto it = std::max_element(belief.begin(), belief.end());
  return Cell{static_cast<std::int32_t>(it - belief.begin())};
}

Action greedy_goal_policy(Cell agent, std::span<const double> belief, const GridWorldConfig& cfg) {
  const Cell target = argmax_cell(belief);
  const std::int32_t dc = cfg.col(target) - cfg.col(agent);
  const std::int32_t dr = cfg.row(target) - cfg.row(agent);
  if (dc > 0) {
    return Action::kRight;
  }
  if (dc < 0) {
    return Action::kLeft;
  }
  if (dr > 0) {
    return Action::kDown;
  }
  if (dr < 0) {
    return Action::kUp;
  }
  return Action::kNone;
}

Action greedy_goal_policy(const AugmentedState& aug, const GridWorldConfig& cfg) {
  const Cell agent{static_cast<std::int32_t>(std::lround(aug.env_state.at(0)))};
  return greedy_goal_policy(agent, aug.belief.mean, cfg);
}

}  // namespace grid

double bandwidth_policy(const GaussianPosterior& belief, double kappa) {
  return std::max(0.0, belief.mean - kappa * std::sqrt(belief.var));
}

double bandwidth_policy(const BeliefSummary& belief, double kappa) {
  return std::max(0.0, belief.mean.at(0) - kappa * belief.std.at(0));
}

}  // namespace segctx
