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

#ifndef SEGCTX_HAZARD_HPP
#define SEGCTX_HAZARD_HPP

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace segctx {

/// Every step after a segment's first ends the segment with probability `rate`.
struct ConstantHazard {
  double rate = 0.0;
};

/// Segment lengths are max(1, round(N(mean, std^2))).
struct TruncatedGaussianLength {
  double mean = 80.0;
  double std = 10.0;
};

using HazardSpec = std::variant<ConstantHazard, TruncatedGaussianLength>;

/// Throws ConfigError when the parameters violate the variant's invariants.
void validate(const HazardSpec& spec);

std::string describe(const HazardSpec& spec);

/// Conditional-stop form of a segment-length prior.
///
/// `change_prob(k)` is the probability that a segment which has lasted k steps
/// ends, so that the next step starts a new segment. The growth probability is
/// its complement; no other transitions exist. Gaussian length priors are
/// converted through h(k) = P(L = k | L >= k) and tabulated.
class HazardFunction {
 public:
  explicit HazardFunction(HazardSpec spec, std::int64_t table_size = 4096);

  [[nodiscard]] double change_prob(std::int64_t k) const;
  [[nodiscard]] double log_change(std::int64_t k) const;
  [[nodiscard]] double log_growth(std::int64_t k) const;
  [[nodiscard]] const HazardSpec& spec() const { return spec_; }

 private:
  struct Entry {
    double log_change;
    double log_growth;
  };
  [[nodiscard]] Entry compute(std::int64_t k) const;
  [[nodiscard]] Entry lookup(std::int64_t k) const;

  HazardSpec spec_;
  std::vector<Entry> table_;
};

/// P(L >= k) for the rounded-and-clamped Gaussian length.
double truncated_gaussian_survival(const TruncatedGaussianLength& g, std::int64_t k);

/// One draw of max(1, round(N(mean, std^2))).
std::int64_t sample_truncated_gaussian_length(const TruncatedGaussianLength& g,
                                              std::mt19937_64& rng);

}  // namespace segctx

#endif  // SEGCTX_HAZARD_HPP
