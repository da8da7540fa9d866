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

#include "segctx/hazard.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "segctx/errors.hpp"
#include "segctx/log_math.hpp"

namespace segctx {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

void validate(const HazardSpec& spec) {
  std::visit(Overloaded{
                 [](const ConstantHazard& c) {
                   if (!(c.rate >= 0.0 && c.rate <= 1.0)) {
                     throw ConfigError("constant hazard rate must lie in [0, 1]");
                   }
                 },
                 [](const TruncatedGaussianLength& g) {
                   if (!(g.mean > 0.0) || !std::isfinite(g.mean)) {
                     throw ConfigError("gaussian segment length mean must be > 0");
                   }
                   if (!(g.std > 0.0) || !std::isfinite(g.std)) {
                     throw ConfigError("gaussian segment length std must be > 0");
                   }
                 },
             },
             spec);
}

std::string describe(const HazardSpec& spec) {
  // Shortest text that parses back to the same double.
  auto num = [](double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
  };
  return std::visit(Overloaded{
                        [&](const ConstantHazard& c) { return "constant(" + num(c.rate) + ")"; },
                        [&](const TruncatedGaussianLength& g) {
                          return "gaussian(" + num(g.mean) + "," + num(g.std) + ")";
                        },
                    },
                    spec);
}

double truncated_gaussian_survival(const TruncatedGaussianLength& g, std::int64_t k) {
  if (k <= 1) {
    return 1.0;
  }
  const double z = (static_cast<double>(k) - 0.5 - g.mean) / g.std;
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

std::int64_t sample_truncated_gaussian_length(const TruncatedGaussianLength& g,
                                              std::mt19937_64& rng) {
  std::normal_distribution<double> dist(g.mean, g.std);
  const auto len = static_cast<std::int64_t>(std::llround(dist(rng)));
  return len < 1 ? 1 : len;
}

HazardFunction::HazardFunction(HazardSpec spec, std::int64_t table_size)
    : spec_(std::move(spec)) {
  validate(spec_);
  if (std::holds_alternative<TruncatedGaussianLength>(spec_)) {
    table_.reserve(static_cast<std::size_t>(table_size));
    for (std::int64_t k = 1; k <= table_size; ++k) {
      table_.push_back(compute(k));
    }
  }
}

HazardFunction::Entry HazardFunction::compute(std::int64_t k) const {
  if (const auto* c = std::get_if<ConstantHazard>(&spec_)) {
    return {safe_log(c->rate), std::log1p(-c->rate)};
  }
  const auto& g = std::get<TruncatedGaussianLength>(spec_);
  const double s_k = truncated_gaussian_survival(g, k);
  const double s_next = truncated_gaussian_survival(g, k + 1);
  if (s_k <= 0.0) {
    return {0.0, kNegInf};
  }
  // Below the mean both survivals are close to one; take the pmf from the
  // lower CDF tail so small hazards keep their relative precision.
  double pmf;
  const double z_hi = (static_cast<double>(k) + 0.5 - g.mean) / g.std;
  if (k >= 2 && z_hi <= 0.0) {
    const double z_lo = (static_cast<double>(k) - 0.5 - g.mean) / g.std;
    pmf = 0.5 * std::erfc(-z_hi / std::sqrt(2.0)) - 0.5 * std::erfc(-z_lo / std::sqrt(2.0));
  } else if (k == 1 && z_hi <= 0.0) {
    pmf = 0.5 * std::erfc(-z_hi / std::sqrt(2.0));
  } else {
    pmf = s_k - s_next;
  }
  const double h = std::min(1.0, std::max(0.0, pmf / s_k));
  const double log_growth = s_next > 0.0 ? std::log(s_next) - std::log(s_k) : kNegInf;
  return {safe_log(h), log_growth};
}

HazardFunction::Entry HazardFunction::lookup(std::int64_t k) const {
  if (k < 1) {
    throw DomainError("segment length must be >= 1");
  }
  const auto idx = static_cast<std::size_t>(k - 1);
  if (idx < table_.size()) {
    return table_[idx];
  }
  return compute(k);
}

double HazardFunction::change_prob(std::int64_t k) const { return std::exp(lookup(k).log_change); }

double HazardFunction::log_change(std::int64_t k) const { return lookup(k).log_change; }

double HazardFunction::log_growth(std::int64_t k) const { return lookup(k).log_growth; }

}  // namespace segctx
