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

#ifndef SEGCTX_EPISODE_HPP
#define SEGCTX_EPISODE_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "segctx/errors.hpp"
#include "segctx/hazard.hpp"

namespace segctx {

/// A maximal run of steps sharing one latent context. `start` is 1-based.
template <class Context>
struct Segment {
  std::int64_t start = 1;
  std::int64_t length = 1;
  Context context{};
};

/// Ground-truth segmentation of an episode. Hidden from agents.
template <class Context>
struct EpisodeScript {
  std::vector<Segment<Context>> segments;
  std::int64_t horizon = 0;

  /// Index of the segment containing step t (1-based).
  [[nodiscard]] std::size_t segment_index(std::int64_t t) const {
    if (t < 1 || t > horizon) {
      throw PreconditionError("step outside the episode horizon");
    }
    std::size_t lo = 0;
    std::size_t hi = segments.size();
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (segments[mid].start <= t) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;
  }

  [[nodiscard]] const Context& context_at(std::int64_t t) const {
    return segments[segment_index(t)].context;
  }

  /// Ground-truth run length G_t.
  [[nodiscard]] std::int64_t runlength_at(std::int64_t t) const {
    return t - segments[segment_index(t)].start + 1;
  }

  [[nodiscard]] std::int64_t segment_start_at(std::int64_t t) const {
    return segments[segment_index(t)].start;
  }

  /// Steps at which a new segment begins, excluding step 1.
  [[nodiscard]] std::vector<std::int64_t> changepoints() const {
    std::vector<std::int64_t> out;
    for (std::size_t i = 1; i < segments.size(); ++i) {
      out.push_back(segments[i].start);
    }
    return out;
  }
};

/// One environment step: the move from state_prev to state_next at step t.
///
/// The transition recorded at step t is generated under the context of the
/// segment containing t. `obs_context` carries the observable context x_t and
/// is present only for trajectories recorded with training visibility.
struct TransitionRecord {
  std::int64_t t = 0;
  std::vector<double> state_prev;
  double action = 0.0;
  double reward = 0.0;
  std::vector<double> state_next;
  std::optional<std::vector<double>> obs_context;
  std::int64_t true_runlength = 0;
};

enum class Visibility { kDeployment, kTraining };

/// Draws a segmentation of [1, horizon] and one context per segment.
///
/// `sampler(rng, previous)` returns a context; `previous` points at the prior
/// segment's context or is null for the first segment.
template <class Context, class Sampler>
EpisodeScript<Context> sample_episode_script(const HazardSpec& hazard, Sampler&& sampler,
                                             std::int64_t horizon, std::mt19937_64& rng) {
  validate(hazard);
  if (horizon < 1) {
    throw ConfigError("horizon must be >= 1");
  }
  EpisodeScript<Context> script;
  script.horizon = horizon;
  auto open_segment = [&](std::int64_t start) {
    const Context* prev = script.segments.empty() ? nullptr : &script.segments.back().context;
    Context ctx = sampler(rng, prev);
    script.segments.push_back(Segment<Context>{start, 1, std::move(ctx)});
  };

  if (const auto* c = std::get_if<ConstantHazard>(&hazard)) {
    std::bernoulli_distribution change(c->rate);
    open_segment(1);
    for (std::int64_t t = 2; t <= horizon; ++t) {
      if (change(rng)) {
        open_segment(t);
      } else {
        ++script.segments.back().length;
      }
    }
    return script;
  }

  const auto& g = std::get<TruncatedGaussianLength>(hazard);
  std::int64_t start = 1;
  while (start <= horizon) {
    const std::int64_t len = sample_truncated_gaussian_length(g, rng);
    open_segment(start);
    script.segments.back().length = std::min(len, horizon - start + 1);
    start += len;
  }
  return script;
}

}  // namespace segctx

#endif  // SEGCTX_EPISODE_HPP
