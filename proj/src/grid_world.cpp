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

#include "segctx/grid_world.hpp"

#include <cstdlib>

#include "segctx/errors.hpp"

namespace segctx::grid {

std::string_view to_string(Action a) {
  switch (a) {
    case Action::kUp:
      return "up";
    case Action::kDown:
      return "down";
    case Action::kLeft:
      return "left";
    case Action::kRight:
      return "right";
    case Action::kNone:
      return "none";
  }
  return "?";
}

void validate(const GridWorldConfig& cfg) {
  if (cfg.width < 1 || cfg.height < 1) {
    throw ConfigError("grid width and height must be positive");
  }
  if (!(cfg.p_other >= 0.0 && cfg.p_other < cfg.p_goal && cfg.p_goal <= 1.0)) {
    throw ConfigError("grid reward probabilities need 0 <= p_other < p_goal <= 1");
  }
  if (cfg.horizon < 1) {
    throw ConfigError("horizon must be >= 1");
  }
  segctx::validate(cfg.hazard);
}

GridEpisode grid_reset(const GridWorldConfig& cfg, std::mt19937_64& rng) {
  validate(cfg);
  std::uniform_int_distribution<std::int32_t> uniform_cell(0, cfg.num_cells() - 1);
  const Cell start{uniform_cell(rng)};
  auto goals = sample_episode_script<Cell>(
      cfg.hazard, [&](std::mt19937_64& g, const Cell*) { return Cell{uniform_cell(g)}; },
      cfg.horizon, rng);
  return {start, std::move(goals)};
}

Cell move(Cell state, Action action, const GridWorldConfig& cfg) {
  std::int32_t c = cfg.col(state);
  std::int32_t r = cfg.row(state);
  switch (action) {
    case Action::kUp:
      r = std::max(0, r - 1);
      break;
    case Action::kDown:
      r = std::min(cfg.height - 1, r + 1);
      break;
    case Action::kLeft:
      c = std::max(0, c - 1);
      break;
    case Action::kRight:
      c = std::min(cfg.width - 1, c + 1);
      break;
    case Action::kNone:
      break;
  }
  return cfg.at(c, r);
}

GridStep grid_step(Cell state, Action action, Cell goal, const GridWorldConfig& cfg,
                   std::mt19937_64& rng, Visibility visibility) {
  if (!cfg.contains(state)) {
    throw PreconditionError("agent cell outside the grid");
  }
  GridStep out;
  out.next = move(state, action, cfg);
  std::bernoulli_distribution reward(out.next == goal ? cfg.p_goal : cfg.p_other);
  out.reward = reward(rng) ? 1.0 : 0.0;
  if (visibility == Visibility::kTraining) {
    out.obs_context = goal;
  }
  return out;
}

std::int32_t manhattan(Cell a, Cell b, const GridWorldConfig& cfg) {
  return std::abs(cfg.col(a) - cfg.col(b)) + std::abs(cfg.row(a) - cfg.row(b));
}

TransitionRecord make_record(std::int64_t t, Cell prev, Action action, const GridStep& step,
                             std::int64_t true_runlength) {
  TransitionRecord rec;
  rec.t = t;
  rec.state_prev = {static_cast<double>(prev.index)};
  rec.action = static_cast<double>(static_cast<int>(action));
  rec.reward = step.reward;
  rec.state_next = {static_cast<double>(step.next.index)};
  if (step.obs_context) {
    rec.obs_context = std::vector<double>{static_cast<double>(step.obs_context->index)};
  }
  rec.true_runlength = true_runlength;
  return rec;
}

}  // namespace segctx::grid
