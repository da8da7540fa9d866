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

#include "segctx/context_models.hpp"

#include <cmath>
#include <string>

#include "segctx/errors.hpp"
#include "segctx/log_math.hpp"

namespace segctx {

namespace {

double bernoulli_loglik(double reward, double p) {
  return reward == 1.0 ? safe_log(p) : safe_log(1.0 - p);
}

void check_reward(double reward) {
  if (reward != 0.0 && reward != 1.0) {
    throw DomainError("categorical goal model needs reward in {0, 1}");
  }
}

void check_cell(const CategoricalGoalStats& stats, std::int32_t cell) {
  if (cell < 0 || static_cast<std::size_t>(cell) >= stats.log_belief.size()) {
    throw DomainError("cell index outside the grid");
  }
}

std::int32_t cell_of(double v) { return static_cast<std::int32_t>(std::lround(v)); }

}  // namespace

BeliefSummary summarize(const ContextPosterior& posterior) {
  BeliefSummary out;
  if (const auto* cat = std::get_if<CategoricalPosterior>(&posterior)) {
    out.mean = cat->probs;
    out.std.reserve(cat->probs.size());
    for (double p : cat->probs) {
      out.std.push_back(std::sqrt(std::max(0.0, p * (1.0 - p))));
    }
    return out;
  }
  const auto& g = std::get<GaussianPosterior>(posterior);
  out.mean = {g.mean};
  out.std = {std::sqrt(g.var)};
  return out;
}

CategoricalGoalStats uniform_categorical(std::int32_t num_cells) {
  if (num_cells < 1) {
    throw ConfigError("categorical model needs at least one cell");
  }
  return {std::vector<double>(static_cast<std::size_t>(num_cells),
                              -std::log(static_cast<double>(num_cells)))};
}

CategoricalGoalStats categorical_update(const CategoricalGoalStats& stats, std::int32_t cell,
                                        double reward, double p0, double p1) {
  check_reward(reward);
  check_cell(stats, cell);
  CategoricalGoalStats out = stats;
  const double at_goal = bernoulli_loglik(reward, p0);
  const double elsewhere = bernoulli_loglik(reward, p1);
  for (std::size_t i = 0; i < out.log_belief.size(); ++i) {
    out.log_belief[i] += static_cast<std::int32_t>(i) == cell ? at_goal : elsewhere;
  }
  const double norm = log_sum_exp(out.log_belief);
  if (norm == kNegInf) {
    throw DomainError("observation has zero probability under every goal cell");
  }
  for (double& v : out.log_belief) {
    v -= norm;
  }
  return out;
}

double categorical_predictive_loglik(const CategoricalGoalStats& stats, std::int32_t cell,
                                     double reward, double p0, double p1) {
  check_reward(reward);
  check_cell(stats, cell);
  const double at_goal = bernoulli_loglik(reward, p0);
  const double elsewhere = bernoulli_loglik(reward, p1);
  std::vector<double> terms = stats.log_belief;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    terms[i] += static_cast<std::int32_t>(i) == cell ? at_goal : elsewhere;
  }
  return log_sum_exp(terms);
}

CategoricalGoalModel::CategoricalGoalModel(std::int32_t num_cells, double p0, double p1,
                                           double context_accuracy)
    : num_cells_(num_cells), p0_(p0), p1_(p1), context_accuracy_(context_accuracy) {
  if (num_cells < 1) {
    throw ConfigError("categorical model needs at least one cell");
  }
  if (!(p0 >= 0.0 && p0 <= 1.0 && p1 >= 0.0 && p1 <= 1.0)) {
    throw ConfigError("reward probabilities must lie in [0, 1]");
  }
  if (!(context_accuracy > 0.0 && context_accuracy <= 1.0)) {
    throw ConfigError("context_accuracy must lie in (0, 1]");
  }
}

CategoricalGoalModel::Stats CategoricalGoalModel::fresh_stats() const {
  return uniform_categorical(num_cells_);
}

std::vector<double> CategoricalGoalModel::cell_loglik(const TransitionRecord& rec,
                                                      Visibility visibility) const {
  if (rec.state_next.empty()) {
    throw DomainError("transition record has no next state");
  }
  check_reward(rec.reward);
  const std::int32_t cell = cell_of(rec.state_next[0]);
  if (cell < 0 || cell >= num_cells_) {
    throw DomainError("cell index outside the grid");
  }
  const double at_goal = bernoulli_loglik(rec.reward, p0_);
  const double elsewhere = bernoulli_loglik(rec.reward, p1_);
  std::vector<double> ll(static_cast<std::size_t>(num_cells_), elsewhere);
  ll[static_cast<std::size_t>(cell)] = at_goal;

  if (visibility == Visibility::kTraining) {
    if (!rec.obs_context || rec.obs_context->empty()) {
      throw PreconditionError("training visibility requires an observable context");
    }
    const std::int32_t x = cell_of((*rec.obs_context)[0]);
    const double hit = safe_log(context_accuracy_);
    const double miss = num_cells_ > 1
                            ? safe_log((1.0 - context_accuracy_) / (num_cells_ - 1))
                            : kNegInf;
    for (std::int32_t i = 0; i < num_cells_; ++i) {
      ll[static_cast<std::size_t>(i)] += i == x ? hit : miss;
    }
  }
  return ll;
}

CategoricalGoalModel::Stats CategoricalGoalModel::update(const Stats& stats,
                                                         const TransitionRecord& rec,
                                                         Visibility visibility) const {
  const std::vector<double> ll = cell_loglik(rec, visibility);
  Stats out = stats;
  for (std::size_t i = 0; i < ll.size(); ++i) {
    out.log_belief[i] += ll[i];
  }
  const double norm = log_sum_exp(out.log_belief);
  if (norm == kNegInf) {
    throw DomainError("observation has zero probability under every goal cell");
  }
  for (double& v : out.log_belief) {
    v -= norm;
  }
  return out;
}

double CategoricalGoalModel::predictive_loglik(const Stats& stats, const TransitionRecord& rec,
                                               Visibility visibility) const {
  std::vector<double> terms = cell_loglik(rec, visibility);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    terms[i] += stats.log_belief[i];
  }
  return log_sum_exp(terms);
}

ContextPosterior CategoricalGoalModel::posterior(const Stats& stats) const {
  CategoricalPosterior out;
  out.probs.reserve(stats.log_belief.size());
  for (double v : stats.log_belief) {
    out.probs.push_back(std::exp(v));
  }
  return out;
}

ContextPosterior CategoricalGoalModel::prior_posterior() const { return posterior(fresh_stats()); }

GaussianMeanStats gaussian_update(const GaussianMeanStats& stats, double y) {
  if (!std::isfinite(y)) {
    throw DomainError("gaussian observation must be finite");
  }
  const double precision = 1.0 / stats.posterior_var + 1.0 / stats.obs_var;
  GaussianMeanStats out = stats;
  out.posterior_var = 1.0 / precision;
  out.posterior_mean =
      out.posterior_var * (stats.posterior_mean / stats.posterior_var + y / stats.obs_var);
  ++out.count;
  return out;
}

double gaussian_predictive_loglik(const GaussianMeanStats& stats, double y) {
  if (!std::isfinite(y)) {
    throw DomainError("gaussian observation must be finite");
  }
  return normal_log_pdf(y, stats.posterior_mean, stats.posterior_var + stats.obs_var);
}

GaussianMeanModel::GaussianMeanModel(double prior_mean, double prior_var, double obs_var,
                                     std::size_t obs_index, double context_obs_var)
    : prior_mean_(prior_mean),
      prior_var_(prior_var),
      obs_var_(obs_var),
      obs_index_(obs_index),
      context_obs_var_(context_obs_var) {
  if (!std::isfinite(prior_mean)) {
    throw ConfigError("prior mean must be finite");
  }
  if (!(prior_var > 0.0) || !(obs_var > 0.0) || !(context_obs_var > 0.0)) {
    throw ConfigError("gaussian model variances must be > 0");
  }
}

GaussianMeanModel::Stats GaussianMeanModel::fresh_stats() const {
  return {prior_mean_, prior_var_, obs_var_, 0};
}

double GaussianMeanModel::observation(const TransitionRecord& rec) const {
  if (obs_index_ >= rec.state_next.size()) {
    throw DomainError("transition record lacks the observed coordinate " +
                      std::to_string(obs_index_));
  }
  return rec.state_next[obs_index_];
}

double GaussianMeanModel::context_reading(const TransitionRecord& rec) const {
  if (!rec.obs_context || rec.obs_context->empty()) {
    throw PreconditionError("training visibility requires an observable context");
  }
  return (*rec.obs_context)[0];
}

GaussianMeanModel::Stats GaussianMeanModel::update(const Stats& stats, const TransitionRecord& rec,
                                                   Visibility visibility) const {
  Stats out = gaussian_update(stats, observation(rec));
  if (visibility == Visibility::kTraining) {
    Stats with_x = out;
    with_x.obs_var = context_obs_var_;
    with_x = gaussian_update(with_x, context_reading(rec));
    with_x.obs_var = obs_var_;
    with_x.count = out.count;
    out = with_x;
  }
  return out;
}

double GaussianMeanModel::predictive_loglik(const Stats& stats, const TransitionRecord& rec,
                                            Visibility visibility) const {
  const double y = observation(rec);
  double ll = gaussian_predictive_loglik(stats, y);
  if (visibility == Visibility::kTraining) {
    // Chain rule: p(y, x | data) = p(y | data) p(x | data, y).
    Stats after = gaussian_update(stats, y);
    after.obs_var = context_obs_var_;
    ll += gaussian_predictive_loglik(after, context_reading(rec));
  }
  return ll;
}

ContextPosterior GaussianMeanModel::posterior(const Stats& stats) const {
  return GaussianPosterior{stats.posterior_mean, stats.posterior_var};
}

ContextPosterior GaussianMeanModel::prior_posterior() const { return posterior(fresh_stats()); }

}  // namespace segctx
