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

#ifndef SEGCTX_SEEDING_HPP
#define SEGCTX_SEEDING_HPP

#include <cstdint>
#include <random>

namespace segctx {

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of episode `index`: splitmix64(master + 0x9E3779B97F4A7C15 * (index + 1)).
std::uint64_t episode_seed(std::uint64_t master, std::uint64_t index);

/// Independent generator streams of one episode.
enum class Stream : std::uint64_t { kScript = 1, kEnvironment = 2, kAgent = 3 };

std::mt19937_64 make_stream(std::uint64_t episode_seed, Stream stream);

}  // namespace segctx

#endif  // SEGCTX_SEEDING_HPP
