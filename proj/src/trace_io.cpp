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

#include "segctx/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "segctx/errors.hpp"

namespace segctx {

using nlohmann::json;

namespace {

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) {
    return std::nullopt;
  }
  return j.at(key).get<T>();
}

json runlengths_json(const std::vector<RunLengthProbability>& v) {
  json out = json::array();
  for (const auto& p : v) {
    out.push_back(json::array({p.runlength, p.probability}));
  }
  return out;
}

std::vector<RunLengthProbability> runlengths_from(const json& j) {
  std::vector<RunLengthProbability> out;
  for (const auto& e : j) {
    out.push_back({e.at(0).get<std::int64_t>(), e.at(1).get<double>()});
  }
  return out;
}

json parse_line(const std::string& line) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed JSON line: ") + e.what());
  }
}

template <class T>
std::string optional_cell(const std::optional<T>& v) {
  if (!v) {
    return "";
  }
  std::ostringstream out;
  out.precision(17);
  out << *v;
  return out.str();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    cells.emplace_back();
  }
  return cells;
}

template <class T>
T parse_cell(const std::string& cell) {
  T out{};
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw IoError("malformed summary cell '" + cell + "'");
  }
  return out;
}

template <class T>
std::optional<T> parse_optional_cell(const std::string& cell) {
  if (cell.empty()) {
    return std::nullopt;
  }
  return parse_cell<T>(cell);
}

}  // namespace

std::vector<RunLengthProbability> top_k(std::vector<RunLengthProbability> posterior, std::size_t k) {
  std::sort(posterior.begin(), posterior.end(), [](const auto& a, const auto& b) {
    if (a.probability != b.probability) {
      return a.probability > b.probability;
    }
    return a.runlength > b.runlength;
  });
  if (posterior.size() > k) {
    posterior.resize(k);
  }
  return posterior;
}

std::string to_jsonl(const StepTrace& s) {
  json j;
  j["episode"] = s.episode;
  j["t"] = s.t;
  j["state"] = s.state;
  j["action"] = s.action;
  j["reward"] = s.reward;
  j["next_state"] = s.next_state;
  j["obs_context"] = optional_json(s.obs_context);
  j["true_runlength"] = s.true_runlength;
  j["inferred_runlength_map"] = optional_json(s.inferred_runlength_map);
  j["belief_mass_on_truth"] = optional_json(s.belief_mass_on_truth);
  j["belief_mean"] = optional_json(s.belief_mean);
  j["belief_std"] = optional_json(s.belief_std);
  j["top_k_runlength_posterior"] =
      s.inferred_runlength_map ? runlengths_json(s.top_k_runlength_posterior) : json(nullptr);
  if (s.belief_full) {
    j["belief_full"] = *s.belief_full;
  }
  if (!s.belief_top.empty()) {
    json top = json::array();
    for (const auto& [cell, p] : s.belief_top) {
      top.push_back(json::array({cell, p}));
    }
    j["belief_top"] = top;
  }
  return j.dump();
}

StepTrace step_trace_from_jsonl(const std::string& line) {
  const json j = parse_line(line);
  StepTrace s;
  try {
    s.episode = j.at("episode").get<std::int64_t>();
    s.t = j.at("t").get<std::int64_t>();
    s.state = j.at("state").get<std::vector<double>>();
    s.action = j.at("action").get<double>();
    s.reward = j.at("reward").get<double>();
    s.next_state = j.at("next_state").get<std::vector<double>>();
    s.obs_context = optional_from<std::vector<double>>(j, "obs_context");
    s.true_runlength = j.at("true_runlength").get<std::int64_t>();
    s.inferred_runlength_map = optional_from<std::int64_t>(j, "inferred_runlength_map");
    s.belief_mass_on_truth = optional_from<double>(j, "belief_mass_on_truth");
    s.belief_mean = optional_from<double>(j, "belief_mean");
    s.belief_std = optional_from<double>(j, "belief_std");
    if (j.contains("top_k_runlength_posterior") && !j.at("top_k_runlength_posterior").is_null()) {
      s.top_k_runlength_posterior = runlengths_from(j.at("top_k_runlength_posterior"));
    }
    s.belief_full = optional_from<std::vector<double>>(j, "belief_full");
    if (j.contains("belief_top")) {
      for (const auto& e : j.at("belief_top")) {
        s.belief_top.emplace_back(e.at(0).get<std::int32_t>(), e.at(1).get<double>());
      }
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed trace record: ") + e.what());
  }
  return s;
}

std::string to_jsonl(const TrajectoryLine& line) {
  const auto& r = line.record;
  json j;
  j["episode"] = line.episode;
  j["t"] = r.t;
  j["state_prev"] = r.state_prev;
  j["action"] = r.action;
  j["reward"] = r.reward;
  j["state_next"] = r.state_next;
  j["obs_context"] = optional_json(r.obs_context);
  j["true_runlength"] = r.true_runlength;
  return j.dump();
}

TrajectoryLine trajectory_from_jsonl(const std::string& line) {
  const json j = parse_line(line);
  TrajectoryLine out;
  try {
    out.episode = j.at("episode").get<std::int64_t>();
    auto& r = out.record;
    r.t = j.at("t").get<std::int64_t>();
    r.state_prev = j.at("state_prev").get<std::vector<double>>();
    r.action = j.at("action").get<double>();
    r.reward = j.at("reward").get<double>();
    r.state_next = j.at("state_next").get<std::vector<double>>();
    r.obs_context = optional_from<std::vector<double>>(j, "obs_context");
    r.true_runlength = j.value("true_runlength", std::int64_t{0});
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed trajectory record: ") + e.what());
  }
  return out;
}

std::vector<TrajectoryLine> read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open trajectory file " + path.string());
  }
  std::vector<TrajectoryLine> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) {
      out.push_back(trajectory_from_jsonl(line));
    }
  }
  return out;
}

std::string to_jsonl(const PosteriorLine& line) {
  json j;
  j["episode"] = line.episode;
  j["t"] = line.t;
  j["map_runlength"] = line.map_runlength;
  j["top_k_runlength_posterior"] = runlengths_json(line.top_k_runlength_posterior);
  j["belief_mean"] = line.belief_mean;
  j["belief_std"] = line.belief_std;
  return j.dump();
}

void write_summaries(std::ostream& out, const std::vector<EpisodeSummary>& summaries) {
  out << kSummaryHeader << '\n';
  std::ostringstream row;
  row.precision(17);
  for (const auto& s : summaries) {
    row.str("");
    row << s.episode << ',' << s.total_reward << ',' << s.steps << ',' << s.num_true_changepoints
        << ',' << optional_cell(s.mean_detection_delay) << ','
        << optional_cell(s.missed_changepoints) << ',' << optional_cell(s.mean_belief_mass_on_truth)
        << ',' << optional_cell(s.mean_belief_error);
    out << row.str() << '\n';
  }
  if (!out) {
    throw IoError("failed to write summary table");
  }
}

std::vector<EpisodeSummary> read_summaries(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSummaryHeader) {
    throw IoError("summary file lacks the expected header");
  }
  std::vector<EpisodeSummary> out;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const auto cells = split_csv(line);
    if (cells.size() != 8) {
      throw IoError("summary row has " + std::to_string(cells.size()) + " cells, expected 8");
    }
    EpisodeSummary s;
    s.episode = parse_cell<std::int64_t>(cells[0]);
    s.total_reward = parse_cell<double>(cells[1]);
    s.steps = parse_cell<std::int64_t>(cells[2]);
    s.num_true_changepoints = parse_cell<std::int64_t>(cells[3]);
    s.mean_detection_delay = parse_optional_cell<double>(cells[4]);
    s.missed_changepoints = parse_optional_cell<std::int64_t>(cells[5]);
    s.mean_belief_mass_on_truth = parse_optional_cell<double>(cells[6]);
    s.mean_belief_error = parse_optional_cell<double>(cells[7]);
    out.push_back(s);
  }
  return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  return out;
}

}  // namespace segctx
