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

#ifndef SEGCTX_GRID_WORLD_HPP
#define SEGCTX_GRID_WORLD_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

#include "segctx/episode.hpp"
#include "segctx/hazard.hpp"

namespace segctx::grid {

/// Row-major cell index: index = row * width + col.
struct Cell {
  std::int32_t index = 0;
  auto operator<=>(const Cell&) const = default;
};

enum class Action : std::uint8_t { kUp = 0, kDown = 1, kLeft = 2, kRight = 3, kNone = 4 };

inline constexpr std::array<Action, 5> kAllActions = {Action::kUp, Action::kDown, Action::kLeft,
                                                      Action::kRight, Action::kNone};

std::string_view to_string(Action a);

struct GridWorldConfig {
  std::int32_t width = 4;
  std::int32_t height = 5;
  double p_goal = 0.9;
  double p_other = 0.1;
  HazardSpec hazard = ConstantHazard{1.0 / 80.0};
  std::int64_t horizon = 400;

  [[nodiscard]] std::int32_t num_cells() const { return width * height; }
  [[nodiscard]] std::int32_t col(Cell c) const { return c.index % width; }
  [[nodiscard]] std::int32_t row(Cell c) const { return c.index / width; }
  [[nodiscard]] Cell at(std::int32_t col, std::int32_t row) const { return Cell{row * width + col}; }
  [[nodiscard]] bool contains(Cell c) const { return c.index >= 0 && c.index < num_cells(); }
};

/// Throws ConfigError unless 0 <= p_other < p_goal <= 1 and the grid is non-empty.
void validate(const GridWorldConfig& cfg);

struct GridEpisode {
  Cell start;
  EpisodeScript<Cell> goals;
};

/// Agent cell uniform over the grid; one uniform goal cell per segment.
GridEpisode grid_reset(const GridWorldConfig& cfg, std::mt19937_64& rng);

struct GridStep {
  Cell next;
  double reward = 0.0;
  std::optional<Cell> obs_context;
};

/// Moves one cell (clamped at the border) and draws the Bernoulli reward.
GridStep grid_step(Cell state, Action action, Cell goal, const GridWorldConfig& cfg,
                   std::mt19937_64& rng, Visibility visibility = Visibility::kDeployment);

Cell move(Cell state, Action action, const GridWorldConfig& cfg);

std::int32_t manhattan(Cell a, Cell b, const GridWorldConfig& cfg);

TransitionRecord make_record(std::int64_t t, Cell prev, Action action, const GridStep& step,
                             std::int64_t true_runlength);

}  // namespace segctx::grid

#endif  // SEGCTX_GRID_WORLD_HPP
