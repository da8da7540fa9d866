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

#include "segctx/metrics.hpp"

#include <cmath>

namespace segctx {

std::vector<DetectionResult> detection_delays(std::span<const std::int64_t> segment_starts,
                                              std::span<const std::int64_t> map_runlength,
                                              std::int64_t reset_threshold) {
  std::vector<DetectionResult> out;
  const auto horizon = static_cast<std::int64_t>(map_runlength.size());
  for (std::size_t i = 1; i < segment_starts.size(); ++i) {
    const std::int64_t start = segment_starts[i];
    if (start > horizon) {
      break;
    }
    const std::int64_t end = i + 1 < segment_starts.size()
                                 ? std::min(segment_starts[i + 1] - 1, horizon)
                                 : horizon;
    DetectionResult r{start, std::nullopt};
    for (std::int64_t t = start; t <= end; ++t) {
      if (map_runlength[static_cast<std::size_t>(t - 1)] <= reset_threshold) {
        r.delay = t - start;
        break;
      }
    }
    out.push_back(r);
  }
  return out;
}

MeanWithError mean_with_error(std::span<const double> values) {
  MeanWithError out;
  out.n = values.size();
  if (values.empty()) {
    return out;
  }
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) {
      ss += (v - out.mean) * (v - out.mean);
    }
    const double var = ss / static_cast<double>(values.size() - 1);
    out.standard_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return out;
}

}  // namespace segctx
