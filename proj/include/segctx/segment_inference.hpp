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

#ifndef SEGCTX_SEGMENT_INFERENCE_HPP
#define SEGCTX_SEGMENT_INFERENCE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "segctx/context_models.hpp"
#include "segctx/episode.hpp"
#include "segctx/errors.hpp"
#include "segctx/hazard.hpp"
#include "segctx/log_math.hpp"

namespace segctx {

struct InferenceConfig {
  std::size_t max_hypotheses = 512;
  Visibility visibility = Visibility::kDeployment;
  HazardSpec hazard = ConstantHazard{1.0 / 80.0};
};

void validate(const InferenceConfig& cfg);

/// G_t = runlength together with the segment's context statistics.
///
/// `stats` holds the transitions at steps t - runlength + 1 .. t folded in
/// order, so the belief of a hypothesis includes the latest step.
template <class Stats>
struct RunLengthHypothesis {
  std::int64_t runlength = 1;
  /// log p(G_t = runlength, tau_{1:t}), unnormalized after pruning.
  double log_joint = 0.0;
  Stats stats;
};

/// Filtering state over the current segment length.
///
/// Hypotheses are kept sorted by increasing runlength. `t == 0` is the state
/// before any transition has been seen.
template <class Stats>
struct RunLengthPosterior {
  std::int64_t t = 0;
  std::vector<RunLengthHypothesis<Stats>> hypotheses;
  /// log of the total normalized posterior mass discarded by pruning so far.
  double pruned_mass_log = kNegInf;
};

struct RunLengthProbability {
  std::int64_t runlength = 1;
  double probability = 0.0;
};

struct BeliefComponent {
  double weight = 0.0;
  ContextPosterior posterior;
};

/// Mixture of per-hypothesis context posteriors weighted by p(G_t | tau).
struct BeliefContext {
  std::vector<BeliefComponent> components;
  BeliefSummary summary;
};

namespace detail {

template <class Stats>
void require_updated(const RunLengthPosterior<Stats>& post) {
  if (post.t == 0 || post.hypotheses.empty()) {
    throw PreconditionError("run-length posterior queried before the first update");
  }
}

template <class Stats>
double log_normalizer(const RunLengthPosterior<Stats>& post) {
  std::vector<double> w;
  w.reserve(post.hypotheses.size());
  for (const auto& h : post.hypotheses) {
    w.push_back(h.log_joint);
  }
  return log_sum_exp(w);
}

/// Orders hypotheses by decreasing weight, ties toward the longer run.
template <class Stats>
bool heavier(const RunLengthHypothesis<Stats>& a, const RunLengthHypothesis<Stats>& b) {
  if (a.log_joint != b.log_joint) {
    return a.log_joint > b.log_joint;
  }
  return a.runlength > b.runlength;
}

}  // namespace detail

template <ContextModel Model>
RunLengthPosterior<typename Model::Stats> init(const Model& /*model*/,
                                               const InferenceConfig& config) {
  validate(config);
  return {};
}

/// Keeps the K heaviest hypotheses. For K >= 2 the runlength-1 hypothesis is
/// always retained, displacing the lightest survivor if needed.
template <class Stats>
RunLengthPosterior<Stats> prune(RunLengthPosterior<Stats> post, std::size_t max_hypotheses) {
  if (max_hypotheses < 1) {
    throw ConfigError("max_hypotheses must be >= 1");
  }
  auto& hyps = post.hypotheses;
  if (hyps.size() <= max_hypotheses) {
    return post;
  }
  const double total = detail::log_normalizer(post);

  std::vector<std::size_t> order(hyps.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return detail::heavier(hyps[a], hyps[b]); });
  std::vector<bool> keep(hyps.size(), false);
  for (std::size_t i = 0; i < max_hypotheses; ++i) {
    keep[order[i]] = true;
  }
  if (max_hypotheses >= 2 && hyps.front().runlength == 1 && !keep[0]) {
    keep[order[max_hypotheses - 1]] = false;
    keep[0] = true;
  }

  std::vector<double> dropped;
  std::vector<RunLengthHypothesis<Stats>> survivors;
  survivors.reserve(max_hypotheses);
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    if (keep[i]) {
      survivors.push_back(std::move(hyps[i]));
    } else {
      dropped.push_back(hyps[i].log_joint - total);
    }
  }
  post.pruned_mass_log = log_add_exp(post.pruned_mass_log, log_sum_exp(dropped));
  hyps = std::move(survivors);
  return post;
}

/// One step of the joint run-length recursion.
///
/// Each hypothesis k either grows to k + 1, scored by the predictive of its
/// own segment statistics, or ends, sending its mass times h(k) to runlength 1
/// where the record is scored under the context prior. Only these two
/// transitions have non-zero prior probability. Hypotheses whose weight
/// becomes zero are dropped.
template <ContextModel Model>
RunLengthPosterior<typename Model::Stats> update(const RunLengthPosterior<typename Model::Stats>& post,
                                                 const TransitionRecord& rec, const Model& model,
                                                 const HazardFunction& hazard,
                                                 const InferenceConfig& config) {
  using Stats = typename Model::Stats;
  if (rec.t != post.t + 1) {
    throw PreconditionError("transition step " + std::to_string(rec.t) + " does not follow step " +
                            std::to_string(post.t));
  }
  if (config.visibility == Visibility::kTraining && !rec.obs_context) {
    throw PreconditionError("training visibility requires an observable context on every step");
  }
  const Visibility vis = config.visibility;

  RunLengthPosterior<Stats> next;
  next.t = rec.t;
  next.pruned_mass_log = post.pruned_mass_log;
  next.hypotheses.reserve(post.hypotheses.size() + 1);

  const Stats fresh = model.fresh_stats();
  const double prior_ll = model.predictive_loglik(fresh, rec, vis);

  if (post.t == 0) {
    next.hypotheses.push_back({1, prior_ll, model.update(fresh, rec, vis)});
  } else {
    double log_change = kNegInf;
    for (const auto& h : post.hypotheses) {
      log_change = log_add_exp(log_change, h.log_joint + hazard.log_change(h.runlength));
    }
    const double change_joint = log_change + prior_ll;
    if (change_joint != kNegInf) {
      next.hypotheses.push_back({1, change_joint, model.update(fresh, rec, vis)});
    }
    for (const auto& h : post.hypotheses) {
      const double log_growth = hazard.log_growth(h.runlength);
      if (log_growth == kNegInf) {
        continue;
      }
      const double joint = h.log_joint + log_growth + model.predictive_loglik(h.stats, rec, vis);
      if (joint == kNegInf || std::isnan(joint)) {
        continue;
      }
      next.hypotheses.push_back({h.runlength + 1, joint, model.update(h.stats, rec, vis)});
    }
  }
  if (next.hypotheses.empty()) {
    throw DomainError("step " + std::to_string(rec.t) + " has zero probability under every run length");
  }
  return prune(std::move(next), config.max_hypotheses);
}

/// Normalized p(G_t = i | tau_{1:t}) over live hypotheses, by increasing runlength.
template <class Stats>
std::vector<RunLengthProbability> posterior_runlength(const RunLengthPosterior<Stats>& post) {
  detail::require_updated(post);
  const double norm = detail::log_normalizer(post);
  std::vector<RunLengthProbability> out;
  out.reserve(post.hypotheses.size());
  for (const auto& h : post.hypotheses) {
    out.push_back({h.runlength, std::exp(h.log_joint - norm)});
  }
  return out;
}

/// Dense form: entry i - 1 is p(G_t = i | tau), for i = 1 .. t.
template <class Stats>
std::vector<double> dense_posterior_runlength(const RunLengthPosterior<Stats>& post) {
  std::vector<double> out(static_cast<std::size_t>(post.t), 0.0);
  for (const auto& p : posterior_runlength(post)) {
    out[static_cast<std::size_t>(p.runlength - 1)] = p.probability;
  }
  return out;
}

template <class Stats>
const RunLengthHypothesis<Stats>& map_hypothesis(const RunLengthPosterior<Stats>& post) {
  detail::require_updated(post);
  const auto it = std::min_element(post.hypotheses.begin(), post.hypotheses.end(),
                                   detail::heavier<Stats>);
  return *it;
}

/// Most probable runlength; exact ties resolve toward the longer run.
template <class Stats>
std::int64_t map_runlength(const RunLengthPosterior<Stats>& post) {
  return map_hypothesis(post).runlength;
}

namespace detail {

inline BeliefSummary mix_summaries(std::span<const BeliefComponent> components) {
  BeliefSummary out;
  const auto& first = components.front().posterior;
  if (std::holds_alternative<CategoricalPosterior>(first)) {
    CategoricalPosterior mixed;
    mixed.probs.assign(std::get<CategoricalPosterior>(first).probs.size(), 0.0);
    for (const auto& c : components) {
      const auto& p = std::get<CategoricalPosterior>(c.posterior).probs;
      for (std::size_t i = 0; i < p.size(); ++i) {
        mixed.probs[i] += c.weight * p[i];
      }
    }
    return summarize(mixed);
  }
  double mean = 0.0;
  for (const auto& c : components) {
    mean += c.weight * std::get<GaussianPosterior>(c.posterior).mean;
  }
  double var = 0.0;
  for (const auto& c : components) {
    const auto& g = std::get<GaussianPosterior>(c.posterior);
    const double d = g.mean - mean;
    var += c.weight * (g.var + d * d);
  }
  out.mean = {mean};
  out.std = {std::sqrt(var)};
  return out;
}

}  // namespace detail

/// Context belief marginalized over segment structures.
template <ContextModel Model>
BeliefContext mixture_belief(const RunLengthPosterior<typename Model::Stats>& post,
                             const Model& model) {
  const auto probs = posterior_runlength(post);
  BeliefContext out;
  out.components.reserve(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    out.components.push_back({probs[i].probability, model.posterior(post.hypotheses[i].stats)});
  }
  out.summary = detail::mix_summaries(out.components);
  return out;
}

/// Context posterior of the MAP hypothesis alone.
template <ContextModel Model>
ContextPosterior map_belief(const RunLengthPosterior<typename Model::Stats>& post,
                            const Model& model) {
  return model.posterior(map_hypothesis(post).stats);
}

/// Single-component belief wrapping one posterior.
inline BeliefContext point_belief(ContextPosterior posterior) {
  BeliefContext out;
  out.components.push_back({1.0, std::move(posterior)});
  out.summary = detail::mix_summaries(out.components);
  return out;
}

/// Stateful wrapper: owns the model, hazard table and posterior of one trajectory.
template <ContextModel Model>
class SegmentInference {
 public:
  using Stats = typename Model::Stats;

  SegmentInference(Model model, InferenceConfig config)
      : model_(std::move(model)),
        config_(std::move(config)),
        hazard_(config_.hazard),
        post_(segctx::init(model_, config_)) {}

  void update(const TransitionRecord& rec) {
    post_ = segctx::update(post_, rec, model_, hazard_, config_);
  }

  [[nodiscard]] const RunLengthPosterior<Stats>& posterior() const { return post_; }
  [[nodiscard]] const Model& model() const { return model_; }
  [[nodiscard]] const InferenceConfig& config() const { return config_; }
  [[nodiscard]] std::int64_t t() const { return post_.t; }

  [[nodiscard]] std::vector<RunLengthProbability> posterior_runlength() const {
    return segctx::posterior_runlength(post_);
  }
  [[nodiscard]] std::int64_t map_runlength() const { return segctx::map_runlength(post_); }
  [[nodiscard]] BeliefContext mixture_belief() const { return segctx::mixture_belief(post_, model_); }
  [[nodiscard]] ContextPosterior map_belief() const { return segctx::map_belief(post_, model_); }

 private:
  Model model_;
  InferenceConfig config_;
  HazardFunction hazard_;
  RunLengthPosterior<Stats> post_;
};

}  // namespace segctx

#endif  // SEGCTX_SEGMENT_INFERENCE_HPP
