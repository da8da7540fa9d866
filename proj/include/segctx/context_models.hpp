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

#ifndef SEGCTX_CONTEXT_MODELS_HPP
#define SEGCTX_CONTEXT_MODELS_HPP

#include <concepts>
#include <cstdint>
#include <variant>
#include <vector>

#include "segctx/episode.hpp"

namespace segctx {

struct CategoricalPosterior {
  std::vector<double> probs;
};

struct GaussianPosterior {
  double mean = 0.0;
  double var = 1.0;
};

using ContextPosterior = std::variant<CategoricalPosterior, GaussianPosterior>;

/// Mean and standard deviation vectors of a context posterior.
///
/// A categorical posterior is summarized as a one-hot random vector, so the
/// mean is the probability vector and std_i = sqrt(p_i (1 - p_i)).
struct BeliefSummary {
  std::vector<double> mean;
  std::vector<double> std;
};

BeliefSummary summarize(const ContextPosterior& posterior);

/// Exact likelihood model over latent contexts.
///
/// `update` folds one transition into the sufficient statistics;
/// `predictive_loglik` is the one-step posterior predictive of a transition
/// given the statistics. Under training visibility both also account for the
/// observable context carried in the record.
template <class M>
concept ContextModel = requires(const M& m, const typename M::Stats& s, const TransitionRecord& r,
                                Visibility v) {
  typename M::Stats;
  { m.fresh_stats() } -> std::same_as<typename M::Stats>;
  { m.update(s, r, v) } -> std::same_as<typename M::Stats>;
  { m.predictive_loglik(s, r, v) } -> std::convertible_to<double>;
  { m.posterior(s) } -> std::same_as<ContextPosterior>;
  { m.prior_posterior() } -> std::same_as<ContextPosterior>;
};

// ---------------------------------------------------------------------------
// Categorical goal-cell model.

/// Normalized log-belief over grid cells.
struct CategoricalGoalStats {
  std::vector<double> log_belief;
};

CategoricalGoalStats uniform_categorical(std::int32_t num_cells);

/// Bayes update of the goal belief on one reward observation at `cell`.
/// Throws DomainError if reward is not 0 or 1 or the cell is out of range.
CategoricalGoalStats categorical_update(const CategoricalGoalStats& stats, std::int32_t cell,
                                        double reward, double p0, double p1);

/// log sum_theta b(theta) Bernoulli(reward; p0 if theta == cell else p1).
double categorical_predictive_loglik(const CategoricalGoalStats& stats, std::int32_t cell,
                                     double reward, double p0, double p1);

class CategoricalGoalModel {
 public:
  using Stats = CategoricalGoalStats;

  /// `context_accuracy` is p(x = theta | theta) for the observable goal
  /// reading; the remaining mass is spread evenly over the other cells.
  CategoricalGoalModel(std::int32_t num_cells, double p0, double p1,
                       double context_accuracy = 0.9);

  [[nodiscard]] Stats fresh_stats() const;
  [[nodiscard]] Stats update(const Stats& stats, const TransitionRecord& rec,
                             Visibility visibility = Visibility::kDeployment) const;
  [[nodiscard]] double predictive_loglik(const Stats& stats, const TransitionRecord& rec,
                                         Visibility visibility = Visibility::kDeployment) const;
  [[nodiscard]] ContextPosterior posterior(const Stats& stats) const;
  [[nodiscard]] ContextPosterior prior_posterior() const;

  [[nodiscard]] std::int32_t num_cells() const { return num_cells_; }
  [[nodiscard]] double p0() const { return p0_; }
  [[nodiscard]] double p1() const { return p1_; }

 private:
  /// Per-cell log-likelihood of the record (reward term, plus x in training).
  [[nodiscard]] std::vector<double> cell_loglik(const TransitionRecord& rec,
                                                Visibility visibility) const;

  std::int32_t num_cells_;
  double p0_;
  double p1_;
  double context_accuracy_;
};

// ---------------------------------------------------------------------------
// Normal-mean model with known observation variance.

struct GaussianMeanStats {
  double posterior_mean = 0.0;
  double posterior_var = 1.0;
  double obs_var = 1.0;
  std::int64_t count = 0;
};

/// Conjugate Normal-Normal update. Throws DomainError for non-finite y.
GaussianMeanStats gaussian_update(const GaussianMeanStats& stats, double y);

/// Log-density of N(posterior_mean, posterior_var + obs_var) at y.
double gaussian_predictive_loglik(const GaussianMeanStats& stats, double y);

class GaussianMeanModel {
 public:
  using Stats = GaussianMeanStats;

  /// The observation is `state_next[obs_index]`; under training visibility
  /// `obs_context[0]` is an extra reading of the mean with variance
  /// `context_obs_var`.
  GaussianMeanModel(double prior_mean, double prior_var, double obs_var,
                    std::size_t obs_index = 0, double context_obs_var = 1.0);

  [[nodiscard]] Stats fresh_stats() const;
  [[nodiscard]] Stats update(const Stats& stats, const TransitionRecord& rec,
                             Visibility visibility = Visibility::kDeployment) const;
  [[nodiscard]] double predictive_loglik(const Stats& stats, const TransitionRecord& rec,
                                         Visibility visibility = Visibility::kDeployment) const;
  [[nodiscard]] ContextPosterior posterior(const Stats& stats) const;
  [[nodiscard]] ContextPosterior prior_posterior() const;

  [[nodiscard]] double prior_mean() const { return prior_mean_; }
  [[nodiscard]] double prior_var() const { return prior_var_; }
  [[nodiscard]] double obs_var() const { return obs_var_; }

 private:
  [[nodiscard]] double observation(const TransitionRecord& rec) const;
  [[nodiscard]] double context_reading(const TransitionRecord& rec) const;

  double prior_mean_;
  double prior_var_;
  double obs_var_;
  std::size_t obs_index_;
  double context_obs_var_;
};

static_assert(ContextModel<CategoricalGoalModel>);
static_assert(ContextModel<GaussianMeanModel>);

}  // namespace segctx

#endif  // SEGCTX_CONTEXT_MODELS_HPP
