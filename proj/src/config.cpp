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

#include "segctx/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "segctx/errors.hpp"

namespace segctx {

namespace pt = boost::property_tree;

namespace {

/// Reads typed keys from one INI section and remembers which keys were used.
class Section {
 public:
  Section(const pt::ptree& root, std::string name) : name_(std::move(name)) {
    if (auto child = root.get_child_optional(pt::ptree::path_type(name_, '\0'))) {
      tree_ = *child;
      present_ = true;
    }
  }

  [[nodiscard]] bool present() const { return present_; }

  [[nodiscard]] std::optional<std::string> text(const std::string& key) {
    allowed_.insert(key);
    const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!v) {
      return std::nullopt;
    }
    return *v;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    return text(key).value_or(fallback);
  }

  double number(const std::string& key, double fallback) {
    const auto v = text(key);
    if (!v) {
      return fallback;
    }
    double out = 0.0;
    const auto* end = v->data() + v->size();
    const auto [ptr, ec] = std::from_chars(v->data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
      throw ConfigError(where(key) + " is not a finite number: '" + *v + "'");
    }
    return out;
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    const auto v = text(key);
    if (!v) {
      return fallback;
    }
    std::int64_t out = 0;
    const auto* end = v->data() + v->size();
    const auto [ptr, ec] = std::from_chars(v->data(), end, out);
    if (ec != std::errc() || ptr != end) {
      throw ConfigError(where(key) + " is not an integer: '" + *v + "'");
    }
    return out;
  }

  std::uint64_t unsigned64(const std::string& key, std::uint64_t fallback) {
    const auto v = text(key);
    if (!v) {
      return fallback;
    }
    std::uint64_t out = 0;
    const auto* end = v->data() + v->size();
    const auto [ptr, ec] = std::from_chars(v->data(), end, out);
    if (ec != std::errc() || ptr != end) {
      throw ConfigError(where(key) + " is not an unsigned 64-bit integer: '" + *v + "'");
    }
    return out;
  }

  void reject_unknown() const {
    for (const auto& [key, child] : tree_) {
      if (!allowed_.contains(key)) {
        throw ConfigError("unknown key '" + key + "' in section [" + name_ + "]");
      }
    }
  }

 private:
  [[nodiscard]] std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

  std::string name_;
  pt::ptree tree_;
  bool present_ = false;
  std::set<std::string> allowed_;
};

HazardSpec read_hazard(Section& s, const HazardSpec& fallback) {
  const auto kind = s.text("hazard");
  if (!kind) {
    // Parameter keys without a kind would be silently ignored otherwise.
    for (const char* key : {"hazard_rate", "hazard_mean", "hazard_std"}) {
      if (s.text(key)) {
        throw ConfigError(std::string(key) + " given without hazard");
      }
    }
    return fallback;
  }
  if (*kind == "constant") {
    const auto rate = s.text("hazard_rate");
    if (!rate) {
      throw ConfigError("constant hazard needs hazard_rate");
    }
    ConstantHazard h{s.number("hazard_rate", 0.0)};
    s.text("hazard_mean");
    s.text("hazard_std");
    return h;
  }
  if (*kind == "gaussian") {
    if (!s.text("hazard_mean") || !s.text("hazard_std")) {
      throw ConfigError("gaussian hazard needs hazard_mean and hazard_std");
    }
    s.text("hazard_rate");
    return TruncatedGaussianLength{s.number("hazard_mean", 0.0), s.number("hazard_std", 0.0)};
  }
  throw ConfigError("unknown hazard '" + *kind + "' (expected constant or gaussian)");
}

EnvKind parse_env_kind(const std::string& text) {
  if (text == "grid") {
    return EnvKind::kGrid;
  }
  if (text == "bandwidth") {
    return EnvKind::kBandwidth;
  }
  if (text == "scalar") {
    return EnvKind::kScalar;
  }
  throw ConfigError("unknown environment kind '" + text + "'");
}

PolicyKind parse_policy(const std::string& text) {
  if (text == "greedy") {
    return PolicyKind::kGreedy;
  }
  if (text == "qlearning") {
    return PolicyKind::kQLearning;
  }
  if (text == "bandwidth") {
    return PolicyKind::kBandwidth;
  }
  if (text == "random") {
    return PolicyKind::kRandom;
  }
  if (text == "passive") {
    return PolicyKind::kPassive;
  }
  throw ConfigError("unknown policy '" + text + "'");
}

Visibility parse_visibility(const std::string& text) {
  if (text == "deployment") {
    return Visibility::kDeployment;
  }
  if (text == "training") {
    return Visibility::kTraining;
  }
  throw ConfigError("unknown visibility '" + text + "'");
}

PolicyKind default_policy(EnvKind env) {
  switch (env) {
    case EnvKind::kGrid:
      return PolicyKind::kGreedy;
    case EnvKind::kBandwidth:
      return PolicyKind::kBandwidth;
    case EnvKind::kScalar:
      return PolicyKind::kPassive;
  }
  return PolicyKind::kPassive;
}

}  // namespace

std::string_view to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::kGrid:
      return "grid";
    case EnvKind::kBandwidth:
      return "bandwidth";
    case EnvKind::kScalar:
      return "scalar";
  }
  return "?";
}

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kGreedy:
      return "greedy";
    case PolicyKind::kQLearning:
      return "qlearning";
    case PolicyKind::kBandwidth:
      return "bandwidth";
    case PolicyKind::kRandom:
      return "random";
    case PolicyKind::kPassive:
      return "passive";
  }
  return "?";
}

const HazardSpec& ExperimentConfig::env_hazard() const {
  switch (env) {
    case EnvKind::kGrid:
      return grid.hazard;
    case EnvKind::kBandwidth:
      return bandwidth.hazard;
    case EnvKind::kScalar:
      return scalar.hazard;
  }
  return grid.hazard;
}

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.message());
  }
  static const std::set<std::string> kSections = {"environment", "inference", "agent", "run"};
  for (const auto& [name, child] : root) {
    if (!kSections.contains(name)) {
      throw ConfigError("unknown section [" + name + "]");
    }
    if (child.empty() && !child.data().empty()) {
      throw ConfigError("key '" + name + "' outside of a section");
    }
  }

  ExperimentConfig cfg;
  Section env(root, "environment");
  if (!env.present()) {
    throw ConfigError("missing section [environment]");
  }
  const auto kind = env.text("kind");
  if (!kind) {
    throw ConfigError("[environment] kind is required");
  }
  cfg.env = parse_env_kind(*kind);
  switch (cfg.env) {
    case EnvKind::kGrid: {
      auto& g = cfg.grid;
      g.width = static_cast<std::int32_t>(env.integer("width", g.width));
      g.height = static_cast<std::int32_t>(env.integer("height", g.height));
      g.p_goal = env.number("p_goal", g.p_goal);
      g.p_other = env.number("p_other", g.p_other);
      g.hazard = read_hazard(env, g.hazard);
      break;
    }
    case EnvKind::kBandwidth: {
      auto& b = cfg.bandwidth;
      b.capacity_min = env.number("capacity_min", b.capacity_min);
      b.capacity_max = env.number("capacity_max", b.capacity_max);
      b.rtt_min = env.number("rtt_min", b.rtt_min);
      b.rtt_max = env.number("rtt_max", b.rtt_max);
      b.obs_noise_std = env.number("obs_noise_std", b.obs_noise_std);
      b.probe_noise_std = env.number("probe_noise_std", b.probe_noise_std);
      b.queue_coeff = env.number("queue_coeff", b.queue_coeff);
      b.smoothing = env.number("smoothing", b.smoothing);
      b.hazard = read_hazard(env, b.hazard);
      break;
    }
    case EnvKind::kScalar: {
      auto& s = cfg.scalar;
      s.prior_mean = env.number("prior_mean", s.prior_mean);
      s.prior_std = env.number("prior_std", s.prior_std);
      s.obs_std = env.number("obs_std", s.obs_std);
      s.min_jump = env.number("min_jump", s.min_jump);
      s.hazard = read_hazard(env, s.hazard);
      break;
    }
  }
  env.reject_unknown();

  Section inf(root, "inference");
  const auto max_h = inf.integer("max_hypotheses", 512);
  if (max_h < 1) {
    throw ConfigError("[inference] max_hypotheses must be >= 1");
  }
  cfg.inference.max_hypotheses = static_cast<std::size_t>(max_h);
  cfg.inference.visibility = parse_visibility(inf.text("visibility", "deployment"));
  cfg.inference.hazard = read_hazard(inf, cfg.env_hazard());
  cfg.agent.belief = parse_belief_mode(inf.text("belief", "map"));
  cfg.context_accuracy = inf.number("context_accuracy", cfg.context_accuracy);
  cfg.context_obs_std = inf.number("context_obs_std", cfg.context_obs_std);
  inf.reject_unknown();

  Section agent(root, "agent");
  cfg.agent.kind = parse_agent_kind(agent.text("kind", "segmented"));
  cfg.agent.policy = default_policy(cfg.env);
  if (const auto p = agent.text("policy")) {
    cfg.agent.policy = parse_policy(*p);
  }
  cfg.agent.kappa = agent.number("kappa", cfg.agent.kappa);
  cfg.agent.q.alpha = agent.number("alpha", cfg.agent.q.alpha);
  cfg.agent.q.gamma = agent.number("gamma", cfg.agent.q.gamma);
  cfg.agent.q.epsilon_start = agent.number("epsilon_start", cfg.agent.q.epsilon_start);
  cfg.agent.q.epsilon_end = agent.number("epsilon_end", cfg.agent.q.epsilon_end);
  cfg.agent.train_episodes = agent.integer("train_episodes", cfg.agent.train_episodes);
  agent.reject_unknown();

  Section run(root, "run");
  if (!run.present()) {
    throw ConfigError("missing section [run]");
  }
  cfg.run.episodes = run.integer("episodes", cfg.run.episodes);
  cfg.run.horizon = run.integer("horizon", cfg.run.horizon);
  cfg.run.seed = run.unsigned64("seed", cfg.run.seed);
  cfg.run.output = run.text("output", cfg.run.output);
  cfg.run.reset_threshold = run.integer("reset_threshold", cfg.run.reset_threshold);
  run.reject_unknown();

  cfg.grid.horizon = cfg.run.horizon;
  cfg.bandwidth.horizon = cfg.run.horizon;
  cfg.scalar.horizon = cfg.run.horizon;
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file " + path.string());
  }
  return parse_config(in);
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.run.episodes < 0) {
    throw ConfigError("[run] episodes must be >= 0");
  }
  if (cfg.run.horizon < 1) {
    throw ConfigError("[run] horizon must be >= 1");
  }
  if (cfg.run.reset_threshold < 1) {
    throw ConfigError("[run] reset_threshold must be >= 1");
  }
  switch (cfg.env) {
    case EnvKind::kGrid:
      grid::validate(cfg.grid);
      if (cfg.agent.policy != PolicyKind::kGreedy && cfg.agent.policy != PolicyKind::kQLearning &&
          cfg.agent.policy != PolicyKind::kRandom) {
        throw ConfigError("grid environment supports policies greedy, qlearning, random");
      }
      break;
    case EnvKind::kBandwidth:
      bandwidth::validate(cfg.bandwidth);
      if (cfg.agent.policy != PolicyKind::kBandwidth && cfg.agent.policy != PolicyKind::kRandom) {
        throw ConfigError("bandwidth environment supports policies bandwidth, random");
      }
      break;
    case EnvKind::kScalar:
      scalar::validate(cfg.scalar);
      if (cfg.agent.policy != PolicyKind::kPassive) {
        throw ConfigError("scalar environment supports only the passive policy");
      }
      break;
  }
  validate(cfg.inference);
  validate(cfg.agent.q);
  if (cfg.agent.train_episodes < 0) {
    throw ConfigError("[agent] train_episodes must be >= 0");
  }
  if (!(cfg.agent.kappa >= 0.0)) {
    throw ConfigError("[agent] kappa must be >= 0");
  }
  if (!(cfg.context_accuracy > 0.0 && cfg.context_accuracy <= 1.0)) {
    throw ConfigError("[inference] context_accuracy must lie in (0, 1]");
  }
  if (!(cfg.context_obs_std > 0.0)) {
    throw ConfigError("[inference] context_obs_std must be > 0");
  }
}

std::string environment_fingerprint(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << to_string(cfg.env) << ";horizon=" << cfg.run.horizon;
  switch (cfg.env) {
    case EnvKind::kGrid:
      out << ";width=" << cfg.grid.width << ";height=" << cfg.grid.height
          << ";p_goal=" << cfg.grid.p_goal << ";p_other=" << cfg.grid.p_other
          << ";hazard=" << describe(cfg.grid.hazard);
      break;
    case EnvKind::kBandwidth: {
      const auto& b = cfg.bandwidth;
      out << ";capacity=" << b.capacity_min << ".." << b.capacity_max << ";rtt=" << b.rtt_min
          << ".." << b.rtt_max << ";obs_noise_std=" << b.obs_noise_std
          << ";probe_noise_std=" << b.probe_noise_std << ";queue_coeff=" << b.queue_coeff
          << ";smoothing=" << b.smoothing << ";hazard=" << describe(b.hazard);
      break;
    }
    case EnvKind::kScalar: {
      const auto& s = cfg.scalar;
      out << ";prior_mean=" << s.prior_mean << ";prior_std=" << s.prior_std
          << ";obs_std=" << s.obs_std << ";min_jump=" << s.min_jump
          << ";hazard=" << describe(s.hazard);
      break;
    }
  }
  return out.str();
}

CategoricalGoalModel make_categorical_model(const ExperimentConfig& cfg) {
  return CategoricalGoalModel(cfg.grid.num_cells(), cfg.grid.p_goal, cfg.grid.p_other,
                              cfg.context_accuracy);
}

GaussianMeanModel make_gaussian_model(const ExperimentConfig& cfg) {
  const double ctx_var = cfg.context_obs_std * cfg.context_obs_std;
  if (cfg.env == EnvKind::kBandwidth) {
    const auto& b = cfg.bandwidth;
    const double range = b.capacity_max - b.capacity_min;
    // Moment-matched Gaussian stand-in for the uniform capacity prior.
    const double prior_var = std::max(range * range / 12.0, 1e-6);
    const double obs_var = std::max(b.probe_noise_std * b.probe_noise_std, 1e-6);
    return GaussianMeanModel(0.5 * (b.capacity_min + b.capacity_max), prior_var, obs_var,
                             bandwidth::kProbeIndex, ctx_var);
  }
  if (cfg.env == EnvKind::kScalar) {
    const auto& s = cfg.scalar;
    return GaussianMeanModel(s.prior_mean, s.prior_std * s.prior_std, s.obs_std * s.obs_std, 0,
                             ctx_var);
  }
  throw ConfigError("gaussian model is defined for bandwidth and scalar environments");
}

}  // namespace segctx
