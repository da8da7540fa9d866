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

#ifndef SEGCTX_LOG_MATH_HPP
#define SEGCTX_LOG_MATH_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace segctx {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)), exact when either side is -inf.
inline double log_add_exp(double a, double b) {
  if (a == kNegInf) {
    return b;
  }
  if (b == kNegInf) {
    return a;
  }
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

inline double log_sum_exp(std::span<const double> values) {
  if (values.empty()) {
    return kNegInf;
  }
  const double hi = *std::max_element(values.begin(), values.end());
  if (hi == kNegInf) {
    return kNegInf;
  }
  double acc = 0.0;
  for (double v : values) {
    acc += std::exp(v - hi);
  }
  return hi + std::log(acc);
}

/// log(p) with log(0) = -inf instead of a pole error.
inline double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

/// Log-density of a univariate normal.
inline double normal_log_pdf(double x, double mean, double var) {
  constexpr double kLog2Pi = 1.8378770664093454835606594728112;
  const double d = x - mean;
  return -0.5 * (kLog2Pi + std::log(var) + d * d / var);
}

}  // namespace segctx

#endif  // SEGCTX_LOG_MATH_HPP
