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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "segctx/belief_agent.hpp"
#include "segctx/errors.hpp"
#include "segctx/q_table.hpp"

namespace {

using segctx::AgentKind;
using segctx::BeliefTracker;
using segctx::CategoricalGoalModel;
using segctx::ConstantHazard;
using segctx::InferenceConfig;
using segctx::TransitionRecord;
using segctx::grid::Action;
using segctx::grid::Cell;
using segctx::grid::GridWorldConfig;

std::vector<double> point_mass(int cells, int at) {
  std::vector<double> b(static_cast<std::size_t>(cells), 0.0);
  b[static_cast<std::size_t>(at)] = 1.0;
  return b;
}

TEST(GreedyPolicy, StaysOnTarget) {
  const GridWorldConfig cfg;
  EXPECT_EQ(segctx::grid::greedy_goal_policy(Cell{6}, point_mass(20, 6), cfg), Action::kNone);
}

TEST(GreedyPolicy, StepsTowardNeighbour) {
  const GridWorldConfig cfg;
  EXPECT_EQ(segctx::grid::greedy_goal_policy(Cell{6}, point_mass(20, 7), cfg), Action::kRight);
  EXPECT_EQ(segctx::grid::greedy_goal_policy(Cell{6}, point_mass(20, 10), cfg), Action::kDown);
  // Horizontal moves come first.
  EXPECT_EQ(segctx::grid::greedy_goal_policy(Cell{6}, point_mass(20, 1), cfg), Action::kLeft);
}

TEST(GreedyPolicy, UniformBeliefHeadsForLowestIndex) {
  const GridWorldConfig cfg;
  const std::vector<double> uniform(20, 0.05);
  EXPECT_EQ(segctx::grid::argmax_cell(uniform), Cell{0});
  EXPECT_EQ(segctx::grid::greedy_goal_policy(Cell{5}, uniform, cfg), Action::kLeft);
  EXPECT_EQ(segctx::grid::greedy_goal_policy(Cell{4}, uniform, cfg), Action::kUp);
}

TEST(GreedyPolicy, AlwaysShortensDistance) {
  const GridWorldConfig cfg;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> b(20);
    for (double& v : b) {
      v = u(rng);
    }
    const Cell agent{static_cast<std::int32_t>(rng() % 20)};
    const Cell target = segctx::grid::argmax_cell(b);
    const Action a = segctx::grid::greedy_goal_policy(agent, b, cfg);
    const auto before = segctx::grid::manhattan(agent, target, cfg);
    if (before == 0) {
      EXPECT_EQ(a, Action::kNone);
    } else {
      EXPECT_EQ(segctx::grid::manhattan(segctx::grid::move(agent, a, cfg), target, cfg), before - 1);
    }
  }
}

segctx::AugmentedState aug(int cell, int target) {
  return {{static_cast<double>(cell)}, {point_mass(20, target), std::vector<double>(20, 0.0)}};
}

TEST(QLearning, DiscretizeUsesArgmaxAndConfidence) {
  const auto key = segctx::discretize(aug(3, 11));
  EXPECT_EQ(key.agent, 3);
  EXPECT_EQ(key.target, 11);
  EXPECT_TRUE(key.confident);
  segctx::AugmentedState flat{{2.0}, {std::vector<double>(20, 0.05), {}}};
  EXPECT_FALSE(segctx::discretize(flat).confident);
}

TEST(QLearning, ZeroLearningRateLeavesTable) {
  segctx::QLearningParams p;
  p.alpha = 0.0;
  segctx::QTable table(p);
  table.set(segctx::discretize(aug(1, 1)), Action::kUp, 0.25);
  const auto out = segctx::q_update(table, aug(1, 1), Action::kUp, 5.0, aug(2, 1));
  EXPECT_EQ(out.value(segctx::discretize(aug(1, 1)), Action::kUp), 0.25);
}

TEST(QLearning, FullStepNoDiscountCopiesReward) {
  segctx::QLearningParams p;
  p.alpha = 1.0;
  p.gamma = 0.0;
  segctx::QTable table(p);
  table.set(segctx::discretize(aug(2, 1)), Action::kDown, 9.0);
  const auto out = segctx::q_update(table, aug(1, 1), Action::kLeft, 0.75, aug(2, 1));
  EXPECT_EQ(out.value(segctx::discretize(aug(1, 1)), Action::kLeft), 0.75);
}

TEST(QLearning, TwoStateChainConverges) {
  // A -> B pays 1, B -> A pays 0. V(A) = 1 / (1 - g^2), V(B) = g / (1 - g^2).
  segctx::QLearningParams p;
  p.alpha = 0.5;
  p.gamma = 0.9;
  segctx::QTable table(p);
  const segctx::QKey a{0, 0, true};
  const segctx::QKey b{1, 0, true};
  for (int i = 0; i < 2000; ++i) {
    table.update(a, Action::kRight, 1.0, b);
    table.update(b, Action::kLeft, 0.0, a);
  }
  const double g = p.gamma;
  EXPECT_NEAR(table.value(a, Action::kRight), 1.0 / (1 - g * g), 1e-6);
  EXPECT_NEAR(table.value(b, Action::kLeft), g / (1 - g * g), 1e-6);
  EXPECT_EQ(table.greedy(a), Action::kRight);
}

TEST(QLearning, GreedyTiesAndEpsilonSchedule) {
  segctx::QTable table;
  EXPECT_EQ(table.greedy({0, 0, false}), Action::kUp);
  EXPECT_DOUBLE_EQ(table.epsilon(0, 100), 0.2);
  EXPECT_NEAR(table.epsilon(25, 100), 0.105, 1e-12);
  EXPECT_DOUBLE_EQ(table.epsilon(50, 100), 0.01);
  EXPECT_DOUBLE_EQ(table.epsilon(99, 100), 0.01);
}

TEST(QLearning, SaveLoadRoundTrip) {
  segctx::QLearningParams p;
  p.alpha = 0.3;
  p.gamma = 0.77;
  segctx::QTable table(p);
  table.set({1, 2, true}, Action::kLeft, 0.1 + 0.2);
  table.set({3, 0, false}, Action::kNone, -1.0 / 3.0);
  std::stringstream buf;
  table.save(buf);
  const auto back = segctx::QTable::load(buf);
  EXPECT_EQ(back.params().alpha, 0.3);
  EXPECT_EQ(back.params().gamma, 0.77);
  EXPECT_EQ(back.value({1, 2, true}, Action::kLeft), 0.1 + 0.2);
  EXPECT_EQ(back.value({3, 0, false}, Action::kNone), -1.0 / 3.0);
  EXPECT_EQ(back.size(), table.size());

  std::stringstream bad("not-a-table\n");
  EXPECT_THROW(segctx::QTable::load(bad), segctx::IoError);
}

TEST(QLearning, AverageOfTables) {
  segctx::QTable a;
  segctx::QTable b;
  a.set({0, 0, false}, Action::kUp, 2.0);
  b.set({0, 0, false}, Action::kUp, 4.0);
  b.set({1, 0, false}, Action::kUp, 1.0);
  const std::vector<segctx::QTable> both{a, b};
  const auto avg = segctx::QTable::average(both);
  EXPECT_EQ(avg.value({0, 0, false}, Action::kUp), 3.0);
  EXPECT_EQ(avg.value({1, 0, false}, Action::kUp), 0.5);
}

// ---------------------------------------------------------------------------

TransitionRecord grid_rec(std::int64_t t, int cell, double reward) {
  TransitionRecord r;
  r.t = t;
  r.state_prev = {static_cast<double>(cell)};
  r.state_next = {static_cast<double>(cell)};
  r.reward = reward;
  return r;
}

std::vector<double> belief_probs(const segctx::BeliefContext& b) { return b.summary.mean; }

TEST(BeliefFor, EveryKindStartsAtThePrior) {
  const CategoricalGoalModel model(20, 0.9, 0.1);
  const std::vector<std::int64_t> starts{1};
  const std::vector<TransitionRecord> none;
  for (auto kind : {AgentKind::kSegmented, AgentKind::kVanilla, AgentKind::kOracle}) {
    const auto b = segctx::belief_for(kind, std::span(none), model, InferenceConfig{}, &starts);
    for (double p : belief_probs(b)) {
      EXPECT_DOUBLE_EQ(p, 0.05);
    }
  }
  EXPECT_THROW(segctx::belief_for(AgentKind::kOracle, std::span(none), model, InferenceConfig{}),
               segctx::PreconditionError);
}

TEST(BeliefFor, SingleSegmentOracleEqualsVanilla) {
  const CategoricalGoalModel model(20, 0.9, 0.1);
  const std::vector<std::int64_t> starts{1};
  std::mt19937_64 rng(2);
  std::vector<TransitionRecord> recs;
  for (int t = 1; t <= 60; ++t) {
    recs.push_back(grid_rec(t, static_cast<int>(rng() % 20), static_cast<double>(rng() % 2)));
    const auto v = segctx::belief_for(AgentKind::kVanilla, std::span(recs), model, InferenceConfig{});
    const auto o = segctx::belief_for(AgentKind::kOracle, std::span(recs), model, InferenceConfig{}, &starts);
    EXPECT_EQ(belief_probs(v), belief_probs(o));
  }
}

TEST(BeliefFor, ChangepointResetsOracleButNotVanilla) {
  const CategoricalGoalModel model(20, 0.9, 0.1);
  const std::vector<std::int64_t> starts{1, 11};
  std::vector<TransitionRecord> recs;
  for (int t = 1; t <= 10; ++t) {
    recs.push_back(grid_rec(t, 4, 1.0));
  }
  // Decision at step 11, the first step of the new segment.
  const auto o = segctx::belief_for(AgentKind::kOracle, std::span(recs), model, InferenceConfig{}, &starts);
  const auto v = segctx::belief_for(AgentKind::kVanilla, std::span(recs), model, InferenceConfig{});
  for (double p : belief_probs(o)) {
    EXPECT_DOUBLE_EQ(p, 0.05);
  }
  auto s = model.fresh_stats();
  for (const auto& r : recs) {
    s = model.update(s, r);
  }
  const auto stale = std::get<segctx::CategoricalPosterior>(model.posterior(s)).probs;
  EXPECT_EQ(belief_probs(v), stale);
  EXPECT_GT(belief_probs(v)[4], 0.99);
}

TEST(Agents, ZeroHazardSegmentedActsLikeVanilla) {
  GridWorldConfig cfg;
  cfg.hazard = ConstantHazard{0.0};
  InferenceConfig inf;
  inf.hazard = ConstantHazard{0.0};
  const CategoricalGoalModel model(cfg.num_cells(), cfg.p_goal, cfg.p_other);

  auto rollout = [&](AgentKind kind) {
    std::mt19937_64 rng(31);
    const auto ep = segctx::grid::grid_reset(cfg, rng);
    EXPECT_EQ(ep.goals.segments.size(), 1u);
    BeliefTracker tracker(kind, model, inf);
    std::vector<Action> actions;
    Cell s = ep.start;
    for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
      const auto belief = tracker.belief().summary.mean;
      const Action a = segctx::grid::greedy_goal_policy(s, belief, cfg);
      actions.push_back(a);
      const auto step = segctx::grid::grid_step(s, a, ep.goals.context_at(t), cfg, rng);
      tracker.observe(segctx::grid::make_record(t, s, a, step, t));
      s = step.next;
    }
    return actions;
  };
  EXPECT_EQ(rollout(AgentKind::kSegmented), rollout(AgentKind::kVanilla));
}

TEST(Agents, OracleMassGrowsWithinSegments) {
  GridWorldConfig cfg;
  const CategoricalGoalModel model(cfg.num_cells(), cfg.p_goal, cfg.p_other);
  const int segments = 1000;
  const int len = 30;
  std::vector<std::int64_t> starts;
  for (int i = 0; i < segments; ++i) {
    starts.push_back(1 + static_cast<std::int64_t>(i) * len);
  }
  BeliefTracker tracker(AgentKind::kOracle, model, InferenceConfig{}, segctx::BeliefMode::kMap, starts);
  std::mt19937_64 rng(41);
  std::vector<double> mass(len, 0.0);
  Cell s{0};
  std::int64_t t = 1;
  for (int seg = 0; seg < segments; ++seg) {
    const Cell goal{static_cast<std::int32_t>(rng() % 20)};
    for (int k = 0; k < len; ++k, ++t) {
      mass[k] += tracker.belief().summary.mean[static_cast<std::size_t>(goal.index)];
      const auto a = static_cast<Action>(rng() % 5);
      const auto step = segctx::grid::grid_step(s, a, goal, cfg, rng);
      tracker.observe(segctx::grid::make_record(t, s, a, step, k + 1));
      s = step.next;
    }
  }
  EXPECT_NEAR(mass[0] / segments, 0.05, 1e-12);
  for (int k = 0; k + 1 < len; ++k) {
    EXPECT_GE(mass[k + 1] / segments, mass[k] / segments - 0.01) << "k=" << k;
  }
  EXPECT_GT(mass[len - 1] / segments, 0.3);
}

TEST(Agents, SegmentedTrackerReportsRunlength) {
  const CategoricalGoalModel model(20, 0.9, 0.1);
  BeliefTracker tracker(AgentKind::kSegmented, model, InferenceConfig{});
  EXPECT_FALSE(tracker.map_runlength());
  tracker.observe(grid_rec(1, 0, 0.0));
  ASSERT_TRUE(tracker.map_runlength());
  EXPECT_EQ(*tracker.map_runlength(), 1);
  BeliefTracker vanilla(AgentKind::kVanilla, model, InferenceConfig{});
  vanilla.observe(grid_rec(1, 0, 0.0));
  EXPECT_FALSE(vanilla.map_runlength());
  EXPECT_TRUE(vanilla.runlength_posterior().empty());
}

TEST(BandwidthPolicy, Examples) {
  EXPECT_EQ(segctx::bandwidth_policy(segctx::GaussianPosterior{3.5, 2.0}, 0.0), 3.5);
  EXPECT_EQ(segctx::bandwidth_policy(segctx::GaussianPosterior{10.0, 4.0}, 1.0), 8.0);
  EXPECT_EQ(segctx::bandwidth_policy(segctx::GaussianPosterior{1.0, 4.0}, 1.0), 0.0);
  EXPECT_EQ(segctx::bandwidth_policy(segctx::BeliefSummary{{10.0}, {2.0}}, 1.0), 8.0);
}

TEST(AgentKindText, RoundTrip) {
  for (auto kind : {AgentKind::kSegmented, AgentKind::kVanilla, AgentKind::kOracle}) {
    EXPECT_EQ(segctx::parse_agent_kind(segctx::to_string(kind)), kind);
  }
  EXPECT_THROW(segctx::parse_agent_kind("psychic"), segctx::ConfigError);
  EXPECT_EQ(segctx::parse_belief_mode("mixture"), segctx::BeliefMode::kMixture);
}

}  // namespace
