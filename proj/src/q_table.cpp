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

#include "segctx/q_table.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "segctx/errors.hpp"

namespace segctx {

namespace {

constexpr const char* kHeader = "segctx-qtable";

grid::Action parse_action(const std::string& text) {
  for (grid::Action a : grid::kAllActions) {
    if (grid::to_string(a) == text) {
      return a;
    }
  }
  throw IoError("unknown action '" + text + "' in q-table");
}

}  // namespace

QKey discretize(const AugmentedState& aug) {
  QKey key;
  key.agent = static_cast<std::int32_t>(std::lround(aug.env_state.at(0)));
  const grid::Cell target = grid::argmax_cell(aug.belief.mean);
  key.target = target.index;
  key.confident = aug.belief.mean[static_cast<std::size_t>(target.index)] >= 0.5;
  return key;
}

void validate(const QLearningParams& params) {
  if (!(params.alpha >= 0.0 && params.alpha <= 1.0)) {
    throw ConfigError("alpha must lie in [0, 1]");
  }
  if (!(params.gamma >= 0.0 && params.gamma <= 1.0)) {
    throw ConfigError("gamma must lie in [0, 1]");
  }
  if (!(params.epsilon_start >= 0.0 && params.epsilon_start <= 1.0 && params.epsilon_end >= 0.0 &&
        params.epsilon_end <= 1.0)) {
    throw ConfigError("exploration rates must lie in [0, 1]");
  }
}

QTable::QTable(QLearningParams params) : params_(params) { validate(params_); }

double QTable::value(const QKey& key, grid::Action action) const {
  const auto it = rows_.find(key);
  return it == rows_.end() ? 0.0 : it->second[static_cast<std::size_t>(action)];
}

void QTable::set(const QKey& key, grid::Action action, double value) {
  auto [it, inserted] = rows_.try_emplace(key, Row{});
  it->second[static_cast<std::size_t>(action)] = value;
}

void QTable::update(const QKey& key, grid::Action action, double reward, const QKey& next) {
  double best_next = 0.0;
  if (const auto it = rows_.find(next); it != rows_.end()) {
    best_next = *std::max_element(it->second.begin(), it->second.end());
  }
  const double old = value(key, action);
  const double target = reward + params_.gamma * best_next;
  set(key, action, old + params_.alpha * (target - old));
}

grid::Action QTable::greedy(const QKey& key) const {
  const auto it = rows_.find(key);
  if (it == rows_.end()) {
    return grid::kAllActions.front();
  }
  const auto best = std::max_element(it->second.begin(), it->second.end());
  return grid::kAllActions[static_cast<std::size_t>(best - it->second.begin())];
}

grid::Action QTable::select(const QKey& key, double epsilon, std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < epsilon) {
    std::uniform_int_distribution<std::size_t> pick(0, grid::kAllActions.size() - 1);
    return grid::kAllActions[pick(rng)];
  }
  return greedy(key);
}

double QTable::epsilon(std::int64_t episode, std::int64_t train_episodes) const {
  const double half = std::max<double>(1.0, static_cast<double>(train_episodes) / 2.0);
  const double frac = static_cast<double>(episode) / half;
  if (frac >= 1.0) {
    return params_.epsilon_end;
  }
  return params_.epsilon_start + frac * (params_.epsilon_end - params_.epsilon_start);
}

void QTable::save(std::ostream& out) const {
  out.precision(17);
  out << kHeader << ' ' << kFormatVersion << '\n';
  out << "alpha " << params_.alpha << '\n';
  out << "gamma " << params_.gamma << '\n';
  out << "epsilon_start " << params_.epsilon_start << '\n';
  out << "epsilon_end " << params_.epsilon_end << '\n';
  for (const auto& [key, row] : rows_) {
    for (std::size_t a = 0; a < row.size(); ++a) {
      out << key.agent << ',' << key.target << ',' << (key.confident ? 1 : 0) << ' '
          << grid::to_string(grid::kAllActions[a]) << ' ' << row[a] << '\n';
    }
  }
  if (!out) {
    throw IoError("failed to write q-table");
  }
}

QTable QTable::load(std::istream& in) {
  std::string header;
  int version = 0;
  if (!(in >> header >> version) || header != kHeader) {
    throw IoError("not a q-table file");
  }
  if (version != kFormatVersion) {
    throw IoError("unsupported q-table version " + std::to_string(version));
  }
  QLearningParams params;
  std::string name;
  for (double* field : {&params.alpha, &params.gamma, &params.epsilon_start, &params.epsilon_end}) {
    if (!(in >> name >> *field)) {
      throw IoError("truncated q-table header");
    }
  }
  QTable table(params);
  std::string key_text;
  std::string action_text;
  double v = 0.0;
  while (in >> key_text >> action_text >> v) {
    QKey key;
    char c1 = 0;
    char c2 = 0;
    int conf = 0;
    std::istringstream key_in(key_text);
    if (!(key_in >> key.agent >> c1 >> key.target >> c2 >> conf) || c1 != ',' || c2 != ',') {
      throw IoError("malformed q-table key '" + key_text + "'");
    }
    key.confident = conf != 0;
    table.set(key, parse_action(action_text), v);
  }
  if (!in.eof()) {
    throw IoError("malformed q-table entry");
  }
  return table;
}

QTable QTable::average(std::span<const QTable> tables) {
  if (tables.empty()) {
    throw PreconditionError("cannot average zero q-tables");
  }
  QTable out(tables.front().params());
  const double n = static_cast<double>(tables.size());
  for (const auto& t : tables) {
    for (const auto& [key, row] : t.rows_) {
      auto [it, inserted] = out.rows_.try_emplace(key, Row{});
      for (std::size_t a = 0; a < row.size(); ++a) {
        it->second[a] += row[a] / n;
      }
    }
  }
  return out;
}

QTable q_update(QTable table, const AugmentedState& aug, grid::Action action, double reward,
                const AugmentedState& aug_next) {
  table.update(discretize(aug), action, reward, discretize(aug_next));
  return table;
}

}  // namespace segctx
