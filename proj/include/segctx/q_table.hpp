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

#ifndef SEGCTX_Q_TABLE_HPP
#define SEGCTX_Q_TABLE_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <span>

#include "segctx/belief_agent.hpp"
#include "segctx/grid_world.hpp"

namespace segctx {

/// Discretized augmented grid state: agent cell, highest-belief cell, and
/// whether that cell holds at least half of the belief mass.
struct QKey {
  std::int32_t agent = 0;
  std::int32_t target = 0;
  bool confident = false;
  auto operator<=>(const QKey&) const = default;
};

QKey discretize(const AugmentedState& aug);

struct QLearningParams {
  double alpha = 0.1;
  double gamma = 0.95;
  double epsilon_start = 0.2;
  double epsilon_end = 0.01;
};

void validate(const QLearningParams& params);

/// Tabular action values over (QKey, grid action); unseen entries read as 0.
class QTable {
 public:
  static constexpr int kFormatVersion = 1;
  using Row = std::array<double, grid::kAllActions.size()>;

  explicit QTable(QLearningParams params = {});

  [[nodiscard]] double value(const QKey& key, grid::Action action) const;
  void set(const QKey& key, grid::Action action, double value);

  /// Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') - Q(s,a)).
  void update(const QKey& key, grid::Action action, double reward, const QKey& next);

  /// Highest-valued action; ties go to the lowest action index.
  [[nodiscard]] grid::Action greedy(const QKey& key) const;

  /// Epsilon-greedy draw.
  grid::Action select(const QKey& key, double epsilon, std::mt19937_64& rng) const;

  /// Linear decay from epsilon_start to epsilon_end over the first half of training.
  [[nodiscard]] double epsilon(std::int64_t episode, std::int64_t train_episodes) const;

  [[nodiscard]] const QLearningParams& params() const { return params_; }
  [[nodiscard]] std::size_t size() const { return rows_.size(); }
  [[nodiscard]] const std::map<QKey, Row>& rows() const { return rows_; }

  /// Text format: a header line, the hyperparameters, then one
  /// "agent,target,confident action value" line per stored entry.
  void save(std::ostream& out) const;
  static QTable load(std::istream& in);

  /// Entry-wise mean of independently trained tables (missing entries count as 0).
  static QTable average(std::span<const QTable> tables);

 private:
  QLearningParams params_;
  std::map<QKey, Row> rows_;
};

/// Value-returning form of QTable::update on augmented states.
QTable q_update(QTable table, const AugmentedState& aug, grid::Action action, double reward,
                const AugmentedState& aug_next);

}  // namespace segctx

#endif  // SEGCTX_Q_TABLE_HPP
