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

#include "segctx/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>

#include "segctx/belief_agent.hpp"
#include "segctx/errors.hpp"
#include "segctx/seeding.hpp"

namespace segctx {

namespace {

constexpr std::uint64_t kTrainingSalt = 0x747261696e696e67ULL;

struct PolicyContext {
  QTable* table = nullptr;
  bool learning = false;
  double epsilon = 0.0;
};

class GridAdaptor {
 public:
  using Context = grid::Cell;
  using State = grid::Cell;
  using Model = CategoricalGoalModel;

  explicit GridAdaptor(const ExperimentConfig& cfg)
      : cfg_(cfg), model_(make_categorical_model(cfg)) {}

  [[nodiscard]] const Model& model() const { return model_; }

  std::pair<State, EpisodeScript<Context>> reset(std::mt19937_64& rng) const {
    auto e = grid::grid_reset(cfg_.grid, rng);
    return {e.start, std::move(e.goals)};
  }

  double act(const State& s, const BeliefContext& belief, std::mt19937_64& rng,
             const PolicyContext& policy) const {
    switch (cfg_.agent.policy) {
      case PolicyKind::kGreedy:
        return encode(grid::greedy_goal_policy(s, belief.summary.mean, cfg_.grid));
      case PolicyKind::kQLearning:
        return encode(policy.table->select(key(s, belief), policy.epsilon, rng));
      default:
        return random_action(rng);
    }
  }

  double random_action(std::mt19937_64& rng) const {
    std::uniform_int_distribution<std::size_t> pick(0, grid::kAllActions.size() - 1);
    return encode(grid::kAllActions[pick(rng)]);
  }

  std::pair<TransitionRecord, State> step(std::int64_t t, const State& s, double action,
                                          const Context& goal, std::mt19937_64& rng,
                                          Visibility vis, std::int64_t runlength) const {
    const auto a = decode(action);
    const auto out = grid::grid_step(s, a, goal, cfg_.grid, rng, vis);
    return {grid::make_record(t, s, a, out, runlength), out.next};
  }

  void learn(const State& s, const BeliefContext& belief, double action, double reward,
             const State& next, const BeliefContext& next_belief, PolicyContext& policy) const {
    if (policy.table == nullptr) {
      return;
    }
    policy.table->update(key(s, belief), decode(action), reward, key(next, next_belief));
  }

  void describe(StepTrace& trace, const BeliefContext& belief, const Context& goal) const {
    const auto& probs = belief.summary.mean;
    trace.belief_mass_on_truth = probs[static_cast<std::size_t>(goal.index)];
    if (cfg_.grid.num_cells() <= kFullBeliefMaxCells) {
      trace.belief_full = probs;
    } else {
      std::vector<std::pair<std::int32_t, double>> cells;
      for (std::size_t i = 0; i < probs.size(); ++i) {
        cells.emplace_back(static_cast<std::int32_t>(i), probs[i]);
      }
      std::stable_sort(cells.begin(), cells.end(),
                       [](const auto& a, const auto& b) { return a.second > b.second; });
      cells.resize(std::min<std::size_t>(cells.size(), kTraceTopK));
      trace.belief_top = std::move(cells);
    }
  }

  static std::vector<double> state_vector(const State& s) { return {static_cast<double>(s.index)}; }

 private:
  static double encode(grid::Action a) { return static_cast<double>(static_cast<int>(a)); }
  static grid::Action decode(double a) { return static_cast<grid::Action>(static_cast<int>(a)); }
  static QKey key(const State& s, const BeliefContext& belief) {
    return discretize(AugmentedState{state_vector(s), belief.summary});
  }

  const ExperimentConfig& cfg_;
  Model model_;
};

class BandwidthAdaptor {
 public:
  using Context = bandwidth::ChannelCondition;
  using State = bandwidth::ChannelStats;
  using Model = GaussianMeanModel;

  explicit BandwidthAdaptor(const ExperimentConfig& cfg)
      : cfg_(cfg), model_(make_gaussian_model(cfg)) {}

  [[nodiscard]] const Model& model() const { return model_; }

  std::pair<State, EpisodeScript<Context>> reset(std::mt19937_64& rng) const {
    return {State{}, bandwidth::sample_script(cfg_.bandwidth, rng)};
  }

  double act(const State&, const BeliefContext& belief, std::mt19937_64& rng,
             const PolicyContext&) const {
    if (cfg_.agent.policy == PolicyKind::kBandwidth) {
      return bandwidth_policy(belief.summary, cfg_.agent.kappa);
    }
    return random_action(rng);
  }

  double random_action(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> rate(0.0, 2.0 * cfg_.bandwidth.capacity_max);
    return rate(rng);
  }

  std::pair<TransitionRecord, State> step(std::int64_t t, const State& s, double action,
                                          const Context& cond, std::mt19937_64& rng,
                                          Visibility vis, std::int64_t runlength) const {
    const auto out = bandwidth::bandwidth_step(s, action, cond, cfg_.bandwidth, rng, vis);
    return {bandwidth::make_record(t, s, action, out, runlength), out.next};
  }

  void learn(const State&, const BeliefContext&, double, double, const State&,
             const BeliefContext&, PolicyContext&) const {}

  void describe(StepTrace& trace, const BeliefContext& belief, const Context&) const {
    trace.belief_mean = belief.summary.mean.at(0);
    trace.belief_std = belief.summary.std.at(0);
  }

  static double truth(const Context& c) { return c.capacity; }
  static std::vector<double> state_vector(const State& s) { return s.to_vector(); }

 private:
  const ExperimentConfig& cfg_;
  Model model_;
};

class ScalarAdaptor {
 public:
  using Context = double;
  using State = double;
  using Model = GaussianMeanModel;

  explicit ScalarAdaptor(const ExperimentConfig& cfg) : cfg_(cfg), model_(make_gaussian_model(cfg)) {}

  [[nodiscard]] const Model& model() const { return model_; }

  std::pair<State, EpisodeScript<Context>> reset(std::mt19937_64& rng) const {
    return {0.0, scalar::sample_script(cfg_.scalar, rng)};
  }

  double act(const State&, const BeliefContext&, std::mt19937_64&, const PolicyContext&) const {
    return 0.0;
  }
  double random_action(std::mt19937_64&) const { return 0.0; }

  std::pair<TransitionRecord, State> step(std::int64_t t, const State& s, double,
                                          const Context& mean, std::mt19937_64& rng,
                                          Visibility vis, std::int64_t runlength) const {
    auto rec = scalar::scalar_step(t, s, mean, cfg_.scalar, rng, vis, runlength);
    const double y = rec.state_next[0];
    return {std::move(rec), y};
  }

  void learn(const State&, const BeliefContext&, double, double, const State&,
             const BeliefContext&, PolicyContext&) const {}

  void describe(StepTrace& trace, const BeliefContext& belief, const Context&) const {
    trace.belief_mean = belief.summary.mean.at(0);
    trace.belief_std = belief.summary.std.at(0);
  }

  static double truth(const Context& c) { return c; }
  static std::vector<double> state_vector(const State& s) { return {s}; }

 private:
  const ExperimentConfig& cfg_;
  Model model_;
};

template <class Adaptor>
EpisodeSummary run_episode(const Adaptor& env, const ExperimentConfig& cfg, std::int64_t episode,
                           std::uint64_t seed, PolicyContext& policy, const TraceSink* sink) {
  auto script_rng = make_stream(seed, Stream::kScript);
  auto env_rng = make_stream(seed, Stream::kEnvironment);
  auto agent_rng = make_stream(seed, Stream::kAgent);

  auto [state, script] = env.reset(script_rng);
  std::vector<std::int64_t> starts;
  starts.reserve(script.segments.size());
  for (const auto& seg : script.segments) {
    starts.push_back(seg.start);
  }

  BeliefTracker<typename Adaptor::Model> tracker(cfg.agent.kind, env.model(), cfg.inference,
                                                 cfg.agent.belief, starts);
  BeliefContext belief = tracker.belief();

  EpisodeSummary summary;
  summary.episode = episode;
  summary.steps = script.horizon;
  summary.num_true_changepoints = static_cast<std::int64_t>(script.segments.size()) - 1;
  std::vector<std::int64_t> map_series;
  double mass_sum = 0.0;
  double error_sum = 0.0;
  bool has_mass = false;
  bool has_error = false;

  for (std::int64_t t = 1; t <= script.horizon; ++t) {
    const auto& ctx = script.context_at(t);
    const double action = env.act(state, belief, agent_rng, policy);
    auto [rec, next] =
        env.step(t, state, action, ctx, env_rng, cfg.inference.visibility, script.runlength_at(t));
    tracker.observe(rec);
    BeliefContext next_belief = tracker.belief();
    if (policy.learning) {
      env.learn(state, belief, action, rec.reward, next, next_belief, policy);
    }
    summary.total_reward += rec.reward;

    StepTrace trace;
    trace.episode = episode;
    trace.t = t;
    trace.state = Adaptor::state_vector(state);
    trace.action = action;
    trace.reward = rec.reward;
    trace.next_state = rec.state_next;
    trace.obs_context = rec.obs_context;
    trace.true_runlength = rec.true_runlength;
    env.describe(trace, belief, ctx);
    if (trace.belief_mass_on_truth) {
      mass_sum += *trace.belief_mass_on_truth;
      has_mass = true;
    }
    if constexpr (requires { Adaptor::truth(ctx); }) {
      error_sum += std::abs(belief.summary.mean.at(0) - Adaptor::truth(ctx));
      has_error = true;
    }
    if (const auto map = tracker.map_runlength()) {
      map_series.push_back(*map);
      trace.inferred_runlength_map = *map;
      trace.top_k_runlength_posterior = top_k(tracker.runlength_posterior());
    }
    if (sink != nullptr && *sink) {
      (*sink)(trace);
    }
    state = next;
    belief = std::move(next_belief);
  }

  const auto steps = static_cast<double>(script.horizon);
  if (has_mass) {
    summary.mean_belief_mass_on_truth = mass_sum / steps;
  }
  if (has_error) {
    summary.mean_belief_error = error_sum / steps;
  }
  if (cfg.agent.kind == AgentKind::kSegmented) {
    const auto results = detection_delays(starts, map_series, cfg.run.reset_threshold);
    std::int64_t missed = 0;
    double delay_sum = 0.0;
    std::int64_t detected = 0;
    for (const auto& r : results) {
      if (r.delay) {
        delay_sum += static_cast<double>(*r.delay);
        ++detected;
      } else {
        ++missed;
      }
    }
    summary.missed_changepoints = missed;
    if (detected > 0) {
      summary.mean_detection_delay = delay_sum / static_cast<double>(detected);
    }
  }
  return summary;
}

template <class Adaptor>
RunOutput run_with(const ExperimentConfig& cfg, const TraceSink& sink) {
  Adaptor env(cfg);
  RunOutput out;
  PolicyContext policy;
  std::optional<QTable> table;
  if (cfg.agent.policy == PolicyKind::kQLearning) {
    table.emplace(cfg.agent.q);
    policy.table = &*table;
    policy.learning = true;
    const std::uint64_t train_master = splitmix64(cfg.run.seed ^ kTrainingSalt);
    for (std::int64_t i = 0; i < cfg.agent.train_episodes; ++i) {
      policy.epsilon = table->epsilon(i, cfg.agent.train_episodes);
      run_episode(env, cfg, i, episode_seed(train_master, static_cast<std::uint64_t>(i)), policy,
                  nullptr);
    }
    policy.learning = false;
    policy.epsilon = 0.0;
  }
  for (std::int64_t i = 0; i < cfg.run.episodes; ++i) {
    out.summaries.push_back(run_episode(env, cfg, i,
                                        episode_seed(cfg.run.seed, static_cast<std::uint64_t>(i)),
                                        policy, &sink));
  }
  out.q_table = std::move(table);
  return out;
}

template <class Adaptor>
std::vector<TrajectoryLine> simulate_with(const ExperimentConfig& cfg) {
  Adaptor env(cfg);
  std::vector<TrajectoryLine> out;
  for (std::int64_t i = 0; i < cfg.run.episodes; ++i) {
    const auto seed = episode_seed(cfg.run.seed, static_cast<std::uint64_t>(i));
    auto script_rng = make_stream(seed, Stream::kScript);
    auto env_rng = make_stream(seed, Stream::kEnvironment);
    auto agent_rng = make_stream(seed, Stream::kAgent);
    auto [state, script] = env.reset(script_rng);
    for (std::int64_t t = 1; t <= script.horizon; ++t) {
      const double action = env.random_action(agent_rng);
      auto [rec, next] = env.step(t, state, action, script.context_at(t), env_rng,
                                  cfg.inference.visibility, script.runlength_at(t));
      out.push_back({i, std::move(rec)});
      state = next;
    }
  }
  return out;
}

template <ContextModel Model>
std::vector<PosteriorLine> infer_with(const Model& model, const ExperimentConfig& cfg,
                                      std::span<const TrajectoryLine> trajectory) {
  std::vector<PosteriorLine> out;
  std::optional<SegmentInference<Model>> inference;
  std::optional<std::int64_t> episode;
  for (const auto& line : trajectory) {
    if (!episode || line.episode != *episode) {
      episode = line.episode;
      inference.emplace(model, cfg.inference);
    }
    inference->update(line.record);
    PosteriorLine p;
    p.episode = line.episode;
    p.t = line.record.t;
    p.map_runlength = inference->map_runlength();
    p.top_k_runlength_posterior = top_k(inference->posterior_runlength());
    const auto belief = inference->mixture_belief();
    p.belief_mean = belief.summary.mean;
    p.belief_std = belief.summary.std;
    out.push_back(std::move(p));
  }
  return out;
}

void write_run_info(const ExperimentConfig& cfg, const std::filesystem::path& path) {
  nlohmann::json j;
  j["format"] = "segctx-run";
  j["version"] = 1;
  j["environment"] = environment_fingerprint(cfg);
  j["seed"] = cfg.run.seed;
  j["episodes"] = cfg.run.episodes;
  j["horizon"] = cfg.run.horizon;
  j["agent"] = std::string(to_string(cfg.agent.kind));
  j["policy"] = std::string(to_string(cfg.agent.policy));
  j["belief"] = cfg.agent.belief == BeliefMode::kMap ? "map" : "mixture";
  j["inference_hazard"] = describe(cfg.inference.hazard);
  j["max_hypotheses"] = cfg.inference.max_hypotheses;
  j["visibility"] = cfg.inference.visibility == Visibility::kTraining ? "training" : "deployment";
  auto out = open_output(path);
  out << j.dump(2) << '\n';
  if (!out) {
    throw IoError("failed to write " + path.string());
  }
}

}  // namespace

RunOutput run_experiment(const ExperimentConfig& cfg, const TraceSink& sink) {
  validate(cfg);
  switch (cfg.env) {
    case EnvKind::kGrid:
      return run_with<GridAdaptor>(cfg, sink);
    case EnvKind::kBandwidth:
      return run_with<BandwidthAdaptor>(cfg, sink);
    case EnvKind::kScalar:
      return run_with<ScalarAdaptor>(cfg, sink);
  }
  return {};
}

RunOutput run_to_directory(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  validate(cfg);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());
  }
  auto traces = open_output(out_dir / kTraceFile);
  RunOutput out = run_experiment(cfg, [&](const StepTrace& s) { traces << to_jsonl(s) << '\n'; });
  traces.close();
  if (!traces) {
    throw IoError("failed to write traces");
  }
  auto summary = open_output(out_dir / kSummaryFile);
  write_summaries(summary, out.summaries);
  write_run_info(cfg, out_dir / kRunInfoFile);
  if (out.q_table) {
    auto q = open_output(out_dir / kQTableFile);
    out.q_table->save(q);
  }
  return out;
}

std::vector<TrajectoryLine> simulate(const ExperimentConfig& cfg) {
  validate(cfg);
  switch (cfg.env) {
    case EnvKind::kGrid:
      return simulate_with<GridAdaptor>(cfg);
    case EnvKind::kBandwidth:
      return simulate_with<BandwidthAdaptor>(cfg);
    case EnvKind::kScalar:
      return simulate_with<ScalarAdaptor>(cfg);
  }
  return {};
}

std::vector<PosteriorLine> infer_offline(const ExperimentConfig& cfg,
                                         std::span<const TrajectoryLine> trajectory) {
  validate(cfg);
  if (cfg.env == EnvKind::kGrid) {
    return infer_with(make_categorical_model(cfg), cfg, trajectory);
  }
  return infer_with(make_gaussian_model(cfg), cfg, trajectory);
}

}  // namespace segctx
