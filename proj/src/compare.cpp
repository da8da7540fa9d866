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

#include "segctx/compare.hpp"

#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "segctx/experiment.hpp"
#include "segctx/trace_io.hpp"

namespace segctx {

namespace {

struct LoadedRun {
  nlohmann::json info;
  std::vector<EpisodeSummary> summaries;
  std::vector<std::optional<std::int64_t>> map_series;
};

LoadedRun load_run(const std::filesystem::path& dir) {
  LoadedRun run;
  {
    std::ifstream in(dir / kRunInfoFile);
    if (!in) {
      throw IoError("cannot open " + (dir / kRunInfoFile).string());
    }
    try {
      run.info = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw IoError("malformed " + (dir / kRunInfoFile).string() + ": " + e.what());
    }
  }
  {
    std::ifstream in(dir / kSummaryFile);
    if (!in) {
      throw IoError("cannot open " + (dir / kSummaryFile).string());
    }
    run.summaries = read_summaries(in);
  }
  std::ifstream in(dir / kTraceFile);
  if (!in) {
    throw IoError("cannot open " + (dir / kTraceFile).string());
  }
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) {
      run.map_series.push_back(step_trace_from_jsonl(line).inferred_runlength_map);
    }
  }
  return run;
}

void require_same(const LoadedRun& a, const LoadedRun& b, const std::filesystem::path& dir_a,
                  const std::filesystem::path& dir_b, const char* key) {
  if (a.info.at(key) != b.info.at(key)) {
    throw MisalignedRunsError("runs " + dir_a.string() + " and " + dir_b.string() +
                              " differ in " + key + ": " + a.info.at(key).dump() + " vs " +
                              b.info.at(key).dump());
  }
}

template <class Getter>
std::optional<double> mean_of_optional(const std::vector<EpisodeSummary>& rows, Getter get) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : rows) {
    if (const auto v = get(r)) {
      sum += static_cast<double>(*v);
      ++n;
    }
  }
  if (n == 0) {
    return std::nullopt;
  }
  return sum / static_cast<double>(n);
}

std::string cell(const std::optional<double>& v) {
  if (!v) {
    return "-";
  }
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << *v;
  return out.str();
}

}  // namespace

CompareReport compare_runs(std::span<const std::filesystem::path> dirs) {
  if (dirs.size() < 2) {
    throw ConfigError("compare needs at least two run directories");
  }
  std::vector<LoadedRun> runs;
  for (const auto& d : dirs) {
    runs.push_back(load_run(d));
  }
  for (std::size_t i = 1; i < runs.size(); ++i) {
    try {
      for (const char* key : {"environment", "seed", "episodes", "horizon"}) {
        require_same(runs[0], runs[i], dirs[0], dirs[i], key);
      }
    } catch (const nlohmann::json::exception& e) {
      throw IoError(std::string("run metadata incomplete: ") + e.what());
    }
  }

  CompareReport report;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& run = runs[i];
    RunReport r;
    r.dir = dirs[i];
    r.agent = run.info.value("agent", "?");
    r.inference_hazard = run.info.value("inference_hazard", "?");
    std::vector<double> rewards;
    for (const auto& s : run.summaries) {
      rewards.push_back(s.total_reward);
    }
    r.total_reward = mean_with_error(rewards);
    r.mean_detection_delay =
        mean_of_optional(run.summaries, [](const auto& s) { return s.mean_detection_delay; });
    r.mean_belief_mass_on_truth =
        mean_of_optional(run.summaries, [](const auto& s) { return s.mean_belief_mass_on_truth; });
    r.mean_belief_error =
        mean_of_optional(run.summaries, [](const auto& s) { return s.mean_belief_error; });
    report.runs.push_back(std::move(r));
  }

  const auto& base = runs[0].map_series;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    auto& r = report.runs[i];
    r.reward_difference = r.total_reward.mean - report.runs[0].total_reward.mean;
    const auto& other = runs[i].map_series;
    if (other.size() != base.size() || base.empty()) {
      continue;
    }
    std::size_t agree = 0;
    bool defined = true;
    for (std::size_t k = 0; k < base.size(); ++k) {
      if (!base[k] || !other[k]) {
        defined = false;
        break;
      }
      agree += *base[k] == *other[k] ? 1 : 0;
    }
    if (defined) {
      r.map_agreement = static_cast<double>(agree) / static_cast<double>(base.size());
    }
  }
  return report;
}

std::string format_report(const CompareReport& report) {
  std::ostringstream out;
  out << "run\tagent\tinference_hazard\tmean_reward\tstderr\treward_diff\tdetection_delay\t"
         "belief_mass_on_truth\tbelief_error\tmap_agreement\n";
  for (const auto& r : report.runs) {
    out << r.dir.string() << '\t' << r.agent << '\t' << r.inference_hazard << '\t'
        << cell(r.total_reward.mean) << '\t' << cell(r.total_reward.standard_error) << '\t'
        << cell(r.reward_difference) << '\t' << cell(r.mean_detection_delay) << '\t'
        << cell(r.mean_belief_mass_on_truth) << '\t' << cell(r.mean_belief_error) << '\t'
        << cell(r.map_agreement) << '\n';
  }
  return out.str();
}

}  // namespace segctx
