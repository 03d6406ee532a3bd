// Copyright 2026 The levisim Authors
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

#pragma once

// Pipeline stages behind the command-line subcommands. Each stage writes
// its artifacts into the output directory; every JSON artifact carries the
// config fingerprint and seed.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "levisim/dynamics.hpp"
#include "levisim/noise.hpp"
#include "levisim/optics.hpp"

namespace levisim::app {

struct Model {
  Particle particle;
  Beam beam;
  GasEnvironment gas;
  optics::TrapFrequencies frequencies;
  noise::NoiseBudget budget;
  dynamics::EquationOfMotion eom;
};

/// Builds the physical model. Throws ValidityError for unphysical input.
Model build_model(const ExperimentConfig& cfg);

struct RunContext {
  ExperimentConfig config;
  std::filesystem::path out_dir = ".";
  /// Trajectory CSV consumed by psd/calibrate; defaults to out_dir/traj.csv.
  std::optional<std::filesystem::path> input;
  unsigned threads = 0;
  std::ostream* out = nullptr;  ///< stdout-like stream for summaries
  std::ostream* err = nullptr;  ///< warnings
};

enum class Stage { trap, simulate, psd, calibrate, budget, sense };

/// Comma-separated stage names, returned in dependency order without
/// duplicates. Throws ConfigError on unknown names.
std::vector<Stage> parse_stages(std::string_view list);
std::string_view stage_name(Stage s);

nlohmann::json run_trap(const RunContext& ctx);
nlohmann::json run_simulate(const RunContext& ctx);
nlohmann::json run_psd(const RunContext& ctx);
nlohmann::json run_calibrate(const RunContext& ctx);
nlohmann::json run_budget(const RunContext& ctx);
nlohmann::json run_sense(const RunContext& ctx);
nlohmann::json run_stage(Stage s, const RunContext& ctx);

/// Regenerates the data behind a built-in reference figure into
/// out_dir/<id>/.
nlohmann::json reproduce(std::string_view id, RunContext ctx);

/// Writes text to a file, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace levisim::app
