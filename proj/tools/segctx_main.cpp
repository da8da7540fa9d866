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

// Command-line front end: simulate, infer, run, compare.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "segctx/compare.hpp"
#include "segctx/config.hpp"
#include "segctx/errors.hpp"
#include "segctx/experiment.hpp"
#include "segctx/trace_io.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::int64_t> episodes;
};

segctx::ExperimentConfig load_with_overrides(const CommonFlags& flags) {
  auto cfg = segctx::load_config(flags.config);
  if (flags.seed) {
    cfg.run.seed = *flags.seed;
  }
  if (flags.out) {
    cfg.run.output = *flags.out;
  }
  if (flags.episodes) {
    cfg.run.episodes = *flags.episodes;
  }
  segctx::validate(cfg);
  return cfg;
}

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "Experiment config file")->required();
  cmd->add_option("--seed", flags.seed, "Master seed (overrides [run] seed)");
  cmd->add_option("--out", flags.out, "Output directory (overrides [run] output)");
  cmd->add_option("--episodes", flags.episodes, "Episode count (overrides [run] episodes)")
      ->check(CLI::NonNegativeNumber);
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw segctx::IoError("cannot create output directory " + dir + ": " + ec.message());
  }
  return fs::path(dir);
}

int cmd_simulate(const CommonFlags& flags) {
  const auto cfg = load_with_overrides(flags);
  const auto lines = segctx::simulate(cfg);
  const auto dir = ensure_dir(cfg.run.output);
  auto out = segctx::open_output(dir / "trajectory.jsonl");
  for (const auto& line : lines) {
    out << segctx::to_jsonl(line) << '\n';
  }
  if (!out) {
    throw segctx::IoError("failed to write trajectory");
  }
  std::cout << "wrote " << lines.size() << " transitions to " << (dir / "trajectory.jsonl").string()
            << '\n';
  return 0;
}

int cmd_infer(const CommonFlags& flags, const std::string& input) {
  const auto cfg = load_with_overrides(flags);
  const auto trajectory = segctx::read_trajectory(input);
  const auto posterior = segctx::infer_offline(cfg, trajectory);
  const auto dir = ensure_dir(cfg.run.output);
  auto out = segctx::open_output(dir / "posterior.jsonl");
  for (const auto& line : posterior) {
    out << segctx::to_jsonl(line) << '\n';
  }
  if (!out) {
    throw segctx::IoError("failed to write posterior");
  }
  std::cout << "wrote " << posterior.size() << " posterior records to "
            << (dir / "posterior.jsonl").string() << '\n';
  return 0;
}

int cmd_run(const CommonFlags& flags) {
  const auto cfg = load_with_overrides(flags);
  const auto result = segctx::run_to_directory(cfg, cfg.run.output);
  double total = 0.0;
  for (const auto& s : result.summaries) {
    total += s.total_reward;
  }
  std::cout << "ran " << result.summaries.size() << " episodes into " << cfg.run.output;
  if (!result.summaries.empty()) {
    std::cout << ", mean total reward " << total / static_cast<double>(result.summaries.size());
  }
  std::cout << '\n';
  return 0;
}

int cmd_compare(const std::vector<std::string>& dirs, const std::optional<std::string>& out_file) {
  std::vector<fs::path> paths(dirs.begin(), dirs.end());
  const auto report = segctx::compare_runs(paths);
  const std::string text = segctx::format_report(report);
  std::cout << text;
  if (out_file) {
    auto out = segctx::open_output(*out_file);
    out << text;
    if (!out) {
      throw segctx::IoError("failed to write " + *out_file);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Segment-aware context inference experiments"};
  app.require_subcommand(1);

  CommonFlags sim_flags;
  auto* simulate = app.add_subcommand("simulate", "Roll out the environment with a random policy");
  add_common(simulate, sim_flags);

  CommonFlags infer_flags;
  std::string input;
  auto* infer = app.add_subcommand("infer", "Offline run-length inference over a trajectory file");
  add_common(infer, infer_flags);
  infer->add_option("--input", input, "Trajectory JSONL written by simulate")->required();

  CommonFlags run_flags;
  auto* run = app.add_subcommand("run", "Run a full experiment");
  add_common(run, run_flags);

  std::vector<std::string> dirs;
  std::optional<std::string> report_out;
  auto* compare = app.add_subcommand("compare", "Compare completed run directories");
  compare->add_option("dirs", dirs, "Run directories")->required()->expected(2, -1);
  compare->add_option("--out", report_out, "Also write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*simulate) {
      return cmd_simulate(sim_flags);
    }
    if (*infer) {
      return cmd_infer(infer_flags, input);
    }
    if (*run) {
      return cmd_run(run_flags);
    }
    return cmd_compare(dirs, report_out);
  } catch (const segctx::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const segctx::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::logic_error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitIo;
  }
}
