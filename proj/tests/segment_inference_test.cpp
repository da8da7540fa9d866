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
#include <vector>

#include "segctx/context_models.hpp"
#include "segctx/errors.hpp"
#include "segctx/segment_inference.hpp"
#include "segmentation_oracle.hpp"

namespace {

using segctx::CategoricalGoalModel;
using segctx::ConstantHazard;
using segctx::GaussianMeanModel;
using segctx::GaussianPosterior;
using segctx::HazardSpec;
using segctx::InferenceConfig;
using segctx::SegmentInference;
using segctx::TransitionRecord;
using segctx::TruncatedGaussianLength;

TransitionRecord grid_rec(std::int64_t t, int cell, double reward) {
  TransitionRecord r;
  r.t = t;
  r.state_prev = {static_cast<double>(cell)};
  r.state_next = {static_cast<double>(cell)};
  r.reward = reward;
  return r;
}

TransitionRecord scalar_rec(std::int64_t t, double y) {
  TransitionRecord r;
  r.t = t;
  r.state_prev = {0.0};
  r.state_next = {y};
  return r;
}

InferenceConfig config_with(HazardSpec hazard, std::size_t k = 512) {
  InferenceConfig cfg;
  cfg.hazard = hazard;
  cfg.max_hypotheses = k;
  return cfg;
}

double total_probability(const std::vector<segctx::RunLengthProbability>& ps) {
  double s = 0.0;
  for (const auto& p : ps) {
    s += p.probability;
  }
  return s;
}

/// Trajectory whose hidden goal (or mean) switches at random steps.
std::vector<TransitionRecord> random_grid_trajectory(std::mt19937_64& rng, int len, int cells) {
  std::vector<TransitionRecord> out;
  int goal = static_cast<int>(rng() % cells);
  for (int t = 1; t <= len; ++t) {
    if (rng() % 4 == 0) {
      goal = static_cast<int>(rng() % cells);
    }
    const int cell = static_cast<int>(rng() % cells);
    const double p = cell == goal ? 0.9 : 0.1;
    const double r = std::uniform_real_distribution<double>(0, 1)(rng) < p ? 1.0 : 0.0;
    out.push_back(grid_rec(t, cell, r));
  }
  return out;
}

std::vector<TransitionRecord> random_scalar_trajectory(std::mt19937_64& rng, int len) {
  std::vector<TransitionRecord> out;
  std::normal_distribution<double> mean_draw(0.0, 3.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  double c = mean_draw(rng);
  for (int t = 1; t <= len; ++t) {
    if (rng() % 4 == 0) {
      c = mean_draw(rng);
    }
    out.push_back(scalar_rec(t, c + noise(rng)));
  }
  return out;
}

TEST(SegmentInference, FirstStepHasRunlengthOne) {
  const GaussianMeanModel model(0.0, 1.0, 1.0);
  SegmentInference inf(model, config_with(ConstantHazard{0.3}));
  EXPECT_THROW((void)inf.posterior_runlength(), segctx::PreconditionError);
  EXPECT_THROW((void)inf.map_runlength(), segctx::PreconditionError);
  inf.update(scalar_rec(1, 0.7));
  const auto p = inf.posterior_runlength();
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].runlength, 1);
  EXPECT_EQ(p[0].probability, 1.0);
}

TEST(SegmentInference, InitIsDeterministic) {
  const GaussianMeanModel model(0.0, 1.0, 1.0);
  const auto a = segctx::init(model, config_with(ConstantHazard{0.3}));
  const auto b = segctx::init(model, config_with(ConstantHazard{0.3}));
  EXPECT_EQ(a.t, b.t);
  EXPECT_EQ(a.hypotheses.size(), b.hypotheses.size());
  EXPECT_THROW((void)segctx::init(model, config_with(ConstantHazard{0.3}, 0)), segctx::ConfigError);
}

TEST(SegmentInference, PreconditionViolations) {
  const GaussianMeanModel model(0.0, 1.0, 1.0);
  SegmentInference inf(model, config_with(ConstantHazard{0.3}));
  EXPECT_THROW(inf.update(scalar_rec(2, 0.0)), segctx::PreconditionError);
  inf.update(scalar_rec(1, 0.0));
  EXPECT_THROW(inf.update(scalar_rec(1, 0.0)), segctx::PreconditionError);

  auto cfg = config_with(ConstantHazard{0.3});
  cfg.visibility = segctx::Visibility::kTraining;
  SegmentInference training(model, cfg);
  EXPECT_THROW(training.update(scalar_rec(1, 0.0)), segctx::PreconditionError);
}

TEST(SegmentInference, ZeroHazardCollapsesToFullHistory) {
  const CategoricalGoalModel model(20, 0.9, 0.1);
  SegmentInference inf(model, config_with(ConstantHazard{0.0}));
  std::mt19937_64 rng(1);
  const auto recs = random_grid_trajectory(rng, 50, 20);
  for (const auto& r : recs) {
    inf.update(r);
    const auto p = inf.posterior_runlength();
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p[0].runlength, r.t);
    EXPECT_EQ(p[0].probability, 1.0);
    if (r.t == 7) {
      EXPECT_EQ(inf.map_runlength(), 7);
    }
  }
}

TEST(SegmentInference, UnitHazardResetsEveryStep) {
  const GaussianMeanModel model(0.0, 1.0, 1.0);
  SegmentInference inf(model, config_with(ConstantHazard{1.0}));
  std::mt19937_64 rng(2);
  for (const auto& r : random_scalar_trajectory(rng, 30)) {
    inf.update(r);
    const auto p = inf.posterior_runlength();
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p[0].runlength, 1);
    EXPECT_EQ(p[0].probability, 1.0);
  }
}

void expect_matches_oracle(const std::vector<TransitionRecord>& recs, const HazardSpec& hazard,
                           const auto& model, const segctx::oracle::SegmentMarginal& marginal) {
  SegmentInference inf(model, config_with(hazard));
  for (std::size_t t = 1; t <= recs.size(); ++t) {
    inf.update(recs[t - 1]);
    const auto dense = segctx::dense_posterior_runlength(inf.posterior());
    const auto expected = segctx::oracle::runlength_posterior(std::span(recs).first(t), hazard, marginal);
    ASSERT_EQ(dense.size(), expected.size());
    for (std::size_t i = 0; i < dense.size(); ++i) {
      EXPECT_NEAR(dense[i], expected[i], 1e-8) << "t=" << t << " runlength=" << i + 1;
    }
  }
}

TEST(SegmentInference, GridFiveStepExampleMatchesEnumeration) {
  std::mt19937_64 rng(3);
  const auto recs = random_grid_trajectory(rng, 5, 20);
  const CategoricalGoalModel model(20, 0.9, 0.1);
  expect_matches_oracle(recs, ConstantHazard{0.2}, model,
                        [](std::span<const TransitionRecord> seg) {
                          return segctx::oracle::categorical_marginal(seg, 20, 0.9, 0.1);
                        });
}

TEST(SegmentInference, MatchesEnumerationForShortTrajectories) {
  std::mt19937_64 rng(4);
  const std::vector<HazardSpec> hazards = {ConstantHazard{0.2}, ConstantHazard{0.05},
                                           TruncatedGaussianLength{4.0, 1.5},
                                           TruncatedGaussianLength{3.0, 0.6}};
  for (const auto& hazard : hazards) {
    for (int trial = 0; trial < 3; ++trial) {
      const CategoricalGoalModel cat(6, 0.8, 0.2);
      expect_matches_oracle(random_grid_trajectory(rng, 10, 6), hazard, cat,
                            [](std::span<const TransitionRecord> seg) {
                              return segctx::oracle::categorical_marginal(seg, 6, 0.8, 0.2);
                            });
      const GaussianMeanModel gauss(0.0, 9.0, 1.0);
      expect_matches_oracle(random_scalar_trajectory(rng, 10), hazard, gauss,
                            [](std::span<const TransitionRecord> seg) {
                              std::vector<double> ys;
                              for (const auto& r : seg) {
                                ys.push_back(r.state_next[0]);
                              }
                              return segctx::oracle::gaussian_marginal(ys, 0.0, 9.0, 1.0);
                            });
    }
  }
}

TEST(SegmentInference, NormalizationAndSupport) {
  const GaussianMeanModel model(0.0, 9.0, 1.0);
  SegmentInference inf(model, config_with(TruncatedGaussianLength{15.0, 4.0}, 64));
  std::mt19937_64 rng(5);
  std::vector<std::int64_t> prev_support;
  for (const auto& r : random_scalar_trajectory(rng, 500)) {
    inf.update(r);
    const auto p = inf.posterior_runlength();
    EXPECT_NEAR(total_probability(p), 1.0, 1e-9);
    std::vector<std::int64_t> support;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i > 0) {
        EXPECT_LT(p[i - 1].runlength, p[i].runlength);
      }
      EXPECT_LE(p[i].runlength, r.t);
      if (p[i].runlength > 1) {
        EXPECT_TRUE(std::binary_search(prev_support.begin(), prev_support.end(), p[i].runlength - 1));
      }
      support.push_back(p[i].runlength);
    }
    prev_support = support;
  }
}

using GaussStats = segctx::GaussianMeanStats;

segctx::RunLengthPosterior<GaussStats> handmade(std::vector<std::pair<std::int64_t, double>> rl_logw,
                                                std::vector<GaussianPosterior> comps = {}) {
  segctx::RunLengthPosterior<GaussStats> post;
  std::int64_t max_rl = 0;
  for (std::size_t i = 0; i < rl_logw.size(); ++i) {
    GaussStats s;
    if (i < comps.size()) {
      s.posterior_mean = comps[i].mean;
      s.posterior_var = comps[i].var;
    }
    post.hypotheses.push_back({rl_logw[i].first, rl_logw[i].second, s});
    max_rl = std::max(max_rl, rl_logw[i].first);
  }
  post.t = max_rl;
  return post;
}

TEST(SegmentInference, EqualWeightsSplitEvenly) {
  const auto post = handmade({{1, -2.0}, {2, -2.0}});
  const auto p = segctx::posterior_runlength(post);
  EXPECT_DOUBLE_EQ(p[0].probability, 0.5);
  EXPECT_DOUBLE_EQ(p[1].probability, 0.5);
}

TEST(SegmentInference, MapTieBreaksTowardLongerRun) {
  const auto post = handmade({{1, -9.0}, {3, -1.5}, {5, -1.5}});
  EXPECT_EQ(segctx::map_runlength(post), 5);
}

TEST(SegmentInference, MixtureOfCategoricalBeliefs) {
  const CategoricalGoalModel model(3, 0.9, 0.1);
  segctx::RunLengthPosterior<segctx::CategoricalGoalStats> post;
  post.t = 2;
  post.hypotheses.push_back({1, std::log(0.7), {{std::log(0.2), std::log(0.3), std::log(0.5)}}});
  post.hypotheses.push_back({2, std::log(0.3), {{std::log(0.6), std::log(0.3), std::log(0.1)}}});
  const auto b = segctx::mixture_belief(post, model);
  EXPECT_NEAR(b.summary.mean[0], 0.7 * 0.2 + 0.3 * 0.6, 1e-12);
  EXPECT_NEAR(b.summary.mean[1], 0.3, 1e-12);
  EXPECT_NEAR(b.summary.mean[2], 0.7 * 0.5 + 0.3 * 0.1, 1e-12);
  ASSERT_EQ(b.components.size(), 2u);
  EXPECT_NEAR(b.components[0].weight + b.components[1].weight, 1.0, 1e-12);
}

TEST(SegmentInference, SingleComponentMixtureIsThatPosterior) {
  const GaussianMeanModel model(0.0, 1.0, 1.0);
  SegmentInference inf(model, config_with(ConstantHazard{0.0}));
  inf.update(scalar_rec(1, 1.0));
  const auto mix = inf.mixture_belief();
  const auto map = std::get<GaussianPosterior>(inf.map_belief());
  EXPECT_DOUBLE_EQ(mix.summary.mean[0], 0.5);
  EXPECT_DOUBLE_EQ(mix.summary.std[0], std::sqrt(0.5));
  EXPECT_DOUBLE_EQ(map.mean, 0.5);
}

TEST(SegmentInference, FreshHypothesisWithoutDataIsPrior) {
  const GaussianMeanModel model(2.0, 3.0, 1.0);
  auto post = handmade({{1, 0.0}}, {{2.0, 3.0}});
  post.t = 1;
  const auto mix = segctx::mixture_belief(post, model);
  EXPECT_EQ(mix.summary.mean[0], 2.0);
  EXPECT_NEAR(mix.summary.std[0], std::sqrt(3.0), 1e-15);
}

TEST(SegmentInference, MapAndMixtureDivergeUnderSpreadWeights) {
  const GaussianMeanModel model(0.0, 1.0, 1.0);
  const auto post = handmade({{1, 0.0}, {2, 0.0}}, {{-5.0, 0.1}, {5.0, 0.1}});
  const auto mix = segctx::mixture_belief(post, model);
  const auto map = std::get<GaussianPosterior>(segctx::map_belief(post, model));
  EXPECT_NEAR(mix.summary.mean[0], 0.0, 1e-12);
  EXPECT_EQ(map.mean, 5.0);
}

TEST(SegmentInference, MapBeliefCloseToMixtureWhenDominant) {
  const GaussianMeanModel model(0.0, 1.0, 1.0);
  const auto post = handmade({{1, std::log(0.005)}, {2, std::log(0.995)}}, {{-3.0, 0.5}, {1.0, 0.4}});
  const auto mix = segctx::mixture_belief(post, model);
  const auto map = std::get<GaussianPosterior>(segctx::map_belief(post, model));
  EXPECT_LT(std::abs(map.mean - mix.summary.mean[0]), std::sqrt(map.var));
}

TEST(SegmentInference, MixtureMomentsMatchQuadrature) {
  const GaussianMeanModel model(0.0, 9.0, 1.0);
  SegmentInference inf(model, config_with(ConstantHazard{0.1}));
  std::mt19937_64 rng(6);
  for (const auto& r : random_scalar_trajectory(rng, 40)) {
    inf.update(r);
  }
  const auto mix = inf.mixture_belief();
  ASSERT_GT(mix.components.size(), 3u);
  auto density = [&](double x) {
    double d = 0.0;
    for (const auto& c : mix.components) {
      const auto& g = std::get<GaussianPosterior>(c.posterior);
      d += c.weight * std::exp(-0.5 * (x - g.mean) * (x - g.mean) / g.var) / std::sqrt(2 * M_PI * g.var);
    }
    return d;
  };
  const double lo = -40.0;
  const double hi = 40.0;
  const int n = 400000;
  const double dx = (hi - lo) / n;
  double m0 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + i * dx;
    const double w = ((i == 0 || i == n) ? 0.5 : 1.0) * density(x) * dx;
    m0 += w;
    m1 += w * x;
    m2 += w * x * x;
  }
  const double mean = m1 / m0;
  const double var = m2 / m0 - mean * mean;
  EXPECT_NEAR(m0, 1.0, 1e-6);
  EXPECT_NEAR(mix.summary.mean[0], mean, 1e-6);
  EXPECT_NEAR(mix.summary.std[0], std::sqrt(var), 1e-6);
}

TEST(Prune, IdentityWhenUnderCapacity) {
  const auto post = handmade({{1, -1.0}, {2, -2.0}, {3, -0.5}});
  const auto out = segctx::prune(post, 3);
  ASSERT_EQ(out.hypotheses.size(), 3u);
  EXPECT_EQ(out.pruned_mass_log, segctx::kNegInf);
}

TEST(Prune, SingleSlotKeepsMap) {
  const auto out = segctx::prune(handmade({{1, -3.0}, {2, -0.1}, {3, -2.0}}), 1);
  ASSERT_EQ(out.hypotheses.size(), 1u);
  EXPECT_EQ(out.hypotheses[0].runlength, 2);
}

TEST(Prune, RunlengthOneIsProtected) {
  const auto post = handmade({{1, -10.0}, {2, -0.1}, {3, -0.2}, {4, -0.3}});
  const auto out = segctx::prune(post, 2);
  ASSERT_EQ(out.hypotheses.size(), 2u);
  EXPECT_EQ(out.hypotheses[0].runlength, 1);
  EXPECT_EQ(out.hypotheses[1].runlength, 2);
  const double total = std::log(std::exp(-10.0) + std::exp(-0.1) + std::exp(-0.2) + std::exp(-0.3));
  const double dropped = std::log(std::exp(-0.2) + std::exp(-0.3)) - total;
  EXPECT_NEAR(out.pruned_mass_log, dropped, 1e-12);
  EXPECT_THROW((void)segctx::prune(post, 0), segctx::ConfigError);
}

TEST(Prune, BoundedHypothesesCloseToExact) {
  const GaussianMeanModel model(0.0, 9.0, 1.0);
  SegmentInference exact(model, config_with(ConstantHazard{1.0 / 80.0}, 100000));
  SegmentInference pruned(model, config_with(ConstantHazard{1.0 / 80.0}, 64));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::int64_t t = 1; t <= 600; ++t) {
    const double c = (t / 50) % 2 == 0 ? 0.0 : 4.0;
    const auto r = scalar_rec(t, c + noise(rng));
    exact.update(r);
    pruned.update(r);
    ASSERT_LE(pruned.posterior().hypotheses.size(), 64u);
  }
  const auto a = segctx::dense_posterior_runlength(exact.posterior());
  const auto b = segctx::dense_posterior_runlength(pruned.posterior());
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    tv += std::abs(a[i] - b[i]);
  }
  EXPECT_LE(0.5 * tv, 1e-6);
}

TEST(SegmentInference, DataFreeReductionIsPureHazardRecursion) {
  const HazardSpec hazard = TruncatedGaussianLength{6.0, 2.0};
  const CategoricalGoalModel model(20, 0.4, 0.4);
  SegmentInference inf(model, config_with(hazard));
  std::mt19937_64 rng(8);
  const auto recs = random_grid_trajectory(rng, 120, 20);
  std::vector<double> prior{1.0};
  for (const auto& r : recs) {
    inf.update(r);
    if (r.t > 1) {
      std::vector<double> next(prior.size() + 1, 0.0);
      for (std::size_t k = 0; k < prior.size(); ++k) {
        const double h = segctx::oracle::hazard(hazard, static_cast<std::int64_t>(k + 1));
        next[0] += prior[k] * h;
        next[k + 1] += prior[k] * (1.0 - h);
      }
      prior = next;
    }
    const auto dense = segctx::dense_posterior_runlength(inf.posterior());
    for (std::size_t i = 0; i < prior.size(); ++i) {
      EXPECT_NEAR(dense[i], prior[i], 1e-12) << "t=" << r.t;
    }
  }
}

/// Wraps a model and inflates every predictive likelihood by a constant factor.
struct ScaledModel {
  using Stats = GaussStats;
  GaussianMeanModel inner;
  double log_scale;
  [[nodiscard]] Stats fresh_stats() const { return inner.fresh_stats(); }
  [[nodiscard]] Stats update(const Stats& s, const TransitionRecord& r, segctx::Visibility v) const {
    return inner.update(s, r, v);
  }
  [[nodiscard]] double predictive_loglik(const Stats& s, const TransitionRecord& r,
                                         segctx::Visibility v) const {
    return inner.predictive_loglik(s, r, v) + log_scale;
  }
  [[nodiscard]] segctx::ContextPosterior posterior(const Stats& s) const { return inner.posterior(s); }
  [[nodiscard]] segctx::ContextPosterior prior_posterior() const { return inner.prior_posterior(); }
};

TEST(SegmentInference, LikelihoodScalingLeavesPosteriorUnchanged) {
  const GaussianMeanModel base(0.0, 4.0, 1.0);
  SegmentInference plain(ScaledModel{base, 0.0}, config_with(ConstantHazard{0.05}));
  SegmentInference scaled(ScaledModel{base, 3.7}, config_with(ConstantHazard{0.05}));
  std::mt19937_64 rng(9);
  for (const auto& r : random_scalar_trajectory(rng, 200)) {
    plain.update(r);
    scaled.update(r);
    const auto a = plain.posterior_runlength();
    const auto b = scaled.posterior_runlength();
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_NEAR(a[i].probability, b[i].probability, 1e-12);
    }
    EXPECT_EQ(plain.map_runlength(), scaled.map_runlength());
  }
}

TEST(SegmentInference, LongRunStaysFinite) {
  const GaussianMeanModel model(0.0, 9.0, 1.0);
  SegmentInference inf(model, config_with(TruncatedGaussianLength{80.0, 10.0}, 512));
  std::mt19937_64 rng(10);
  for (const auto& r : random_scalar_trajectory(rng, 10000)) {
    inf.update(r);
    for (const auto& h : inf.posterior().hypotheses) {
      ASSERT_TRUE(std::isfinite(h.log_joint)) << "t=" << r.t;
    }
  }
  EXPECT_NEAR(total_probability(inf.posterior_runlength()), 1.0, 1e-9);
}

TEST(SegmentInference, PlantedChangeIsDetectedQuickly) {
  const GaussianMeanModel model(0.0, 25.0, 1.0);
  SegmentInference inf(model, config_with(ConstantHazard{1.0 / 80.0}));
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::int64_t t = 1; t <= 52; ++t) {
    inf.update(scalar_rec(t, (t < 50 ? 0.0 : 8.0) + noise(rng)));
  }
  const auto g = inf.map_runlength();
  EXPECT_GE(g, 1);
  EXPECT_LE(g, 3);
}

}  // namespace
