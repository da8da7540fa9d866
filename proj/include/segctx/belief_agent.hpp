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

#ifndef SEGCTX_BELIEF_AGENT_HPP
#define SEGCTX_BELIEF_AGENT_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "segctx/context_models.hpp"
#include "segctx/grid_world.hpp"
#include "segctx/segment_inference.hpp"

namespace segctx {

/// How an agent turns the trajectory into a context belief.
///
/// kSegmented runs the run-length recursion; kVanilla folds the whole history
/// into one never-resetting posterior; kOracle resets the posterior at the
/// ground-truth segment boundaries.
enum class AgentKind { kSegmented, kVanilla, kOracle };

/// Which belief a segmented agent acts on.
enum class BeliefMode { kMap, kMixture };

std::string_view to_string(AgentKind kind);
AgentKind parse_agent_kind(std::string_view text);
BeliefMode parse_belief_mode(std::string_view text);

/// Environment state paired with the belief summary.
struct AugmentedState {
  std::vector<double> env_state;
  BeliefSummary belief;
};

/// Maintains the decision-time belief of one agent over one trajectory.
///
/// After observing transitions 1..n, `belief()` is the belief the agent uses
/// to pick the action that produces transition n + 1. Before any transition
/// every kind returns the context prior.
template <ContextModel Model>
class BeliefTracker {
 public:
  using Stats = typename Model::Stats;

  /// `segment_starts` (1-based, ascending, including 1) is required for kOracle.
  BeliefTracker(AgentKind kind, Model model, InferenceConfig config, BeliefMode mode = BeliefMode::kMap,
                std::vector<std::int64_t> segment_starts = {})
      : kind_(kind),
        mode_(mode),
        inference_(model, config),
        stats_(model.fresh_stats()),
        starts_(std::move(segment_starts)) {
    if (kind_ == AgentKind::kOracle && starts_.empty()) {
      throw PreconditionError("oracle belief requires the ground-truth episode script");
    }
  }

  void observe(const TransitionRecord& rec) {
    const Visibility vis = inference_.config().visibility;
    switch (kind_) {
      case AgentKind::kSegmented:
        inference_.update(rec);
        break;
      case AgentKind::kVanilla:
        stats_ = model().update(stats_, rec, vis);
        break;
      case AgentKind::kOracle:
        stats_ = model().update(stats_, rec, vis);
        if (std::binary_search(starts_.begin(), starts_.end(), rec.t + 1)) {
          stats_ = model().fresh_stats();
        }
        break;
    }
    t_ = rec.t;
  }

  [[nodiscard]] BeliefContext belief() const {
    if (kind_ == AgentKind::kSegmented && t_ > 0) {
      if (mode_ == BeliefMode::kMixture) {
        return inference_.mixture_belief();
      }
      return point_belief(inference_.map_belief());
    }
    return point_belief(model().posterior(stats_));
  }

  /// MAP runlength for segmented agents after at least one step.
  [[nodiscard]] std::optional<std::int64_t> map_runlength() const {
    if (kind_ != AgentKind::kSegmented || t_ == 0) {
      return std::nullopt;
    }
    return inference_.map_runlength();
  }

  [[nodiscard]] std::vector<RunLengthProbability> runlength_posterior() const {
    if (kind_ != AgentKind::kSegmented || t_ == 0) {
      return {};
    }
    return inference_.posterior_runlength();
  }

  [[nodiscard]] AgentKind kind() const { return kind_; }
  [[nodiscard]] const Model& model() const { return inference_.model(); }

 private:
  AgentKind kind_;
  BeliefMode mode_;
  SegmentInference<Model> inference_;
  Stats stats_;
  std::vector<std::int64_t> starts_;
  std::int64_t t_ = 0;
};

/// Decision-time belief after the transitions in `trajectory`.
template <ContextModel Model>
BeliefContext belief_for(AgentKind kind, std::span<const TransitionRecord> trajectory,
                         const Model& model, const InferenceConfig& config,
                         const std::vector<std::int64_t>* segment_starts = nullptr,
                         BeliefMode mode = BeliefMode::kMap) {
  if (kind == AgentKind::kOracle && segment_starts == nullptr) {
    throw PreconditionError("oracle belief requires the ground-truth episode script");
  }
  BeliefTracker<Model> tracker(kind, model, config, mode,
                               segment_starts ? *segment_starts : std::vector<std::int64_t>{});
  for (const auto& rec : trajectory) {
    tracker.observe(rec);
  }
  return tracker.belief();
}

namespace grid {

/// Steps along a shortest Manhattan path toward the highest-belief cell.
///
/// Ties on belief go to the lowest cell index; horizontal moves come before
/// vertical ones. Returns kNone when already at the target.
Action greedy_goal_policy(Cell agent, std::span<const double> belief, const GridWorldConfig& cfg);

Action greedy_goal_policy(const AugmentedState& aug, const GridWorldConfig& cfg);

/// Index of the largest entry, lowest index on ties.
Cell argmax_cell(std::span<const double> belief);

}  // namespace grid

/// max(0, mean - kappa * std).
double bandwidth_policy(const GaussianPosterior& belief, double kappa);
double bandwidth_policy(const BeliefSummary& belief, double kappa);

}  // namespace segctx

#endif  // SEGCTX_BELIEF_AGENT_HPP
