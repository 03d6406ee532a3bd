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

// levisim command-line front end.
//
// Exit status: 0 success, 1 unexpected failure, 2 configuration or usage
// error, 3 physically invalid parameters, 4 numerical failure.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "app/config.hpp"
#include "app/pipeline.hpp"
#include "levisim/error.hpp"

namespace {

using levisim::ConfigError;
using namespace levisim::app;

constexpr int kExitConfig = 2;
constexpr int kExitValidity = 3;
constexpr int kExitNumerical = 4;

unsigned thread_limit() {
  const char* env = std::getenv("LEVISIM_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) {
    throw ConfigError("LEVISIM_THREADS must be a positive integer, got '" + std::string(env) + "'");
  }
  return static_cast<unsigned>(v);
}

struct Common {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::string input;
  std::string stages;
  std::string figure = "time_trace";
};

void add_common(CLI::App* cmd, Common& c, bool needs_config) {
  auto* opt = cmd->add_option("-c,--config", c.config, "TOML experiment configuration");
  if (needs_config) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("-o,--out", c.out, "Output directory")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Override simulation.seed");
}

RunContext make_context(const Common& c) {
  RunContext ctx;
  if (!c.config.empty()) ctx.config = load_config(c.config);
  if (c.seed) ctx.config.simulation.seed = *c.seed;
  ctx.out_dir = c.out;
  if (!c.input.empty()) ctx.input = c.input;
  ctx.threads = thread_limit();
  ctx.out = &std::cout;
  ctx.err = &std::cerr;
  return ctx;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levisim: levitated nanoparticle simulator and analyzer"};
  app.require_subcommand(1);
  Common c;

  auto* trap = app.add_subcommand("trap", "Trap frequencies, damping and noise budget");
  add_common(trap, c, true);
  auto* simulate = app.add_subcommand("simulate", "Integrate stochastic trajectories");
  add_common(simulate, c, true);
  auto* psd = app.add_subcommand("psd", "Welch spectra and Lorentzian fits of a trajectory");
  add_common(psd, c, true);
  psd->add_option("trajectory", c.input, "Trajectory CSV (default: <out>/traj.csv)");
  auto* calibrate = app.add_subcommand("calibrate", "Equipartition volts-to-metres calibration");
  add_common(calibrate, c, true);
  calibrate->add_option("trajectory", c.input, "Trajectory CSV (default: <out>/traj.csv)");
  auto* budget = app.add_subcommand("budget", "Noise budget with every rate and its inputs");
  add_common(budget, c, true);
  auto* sense = app.add_subcommand("sense", "Force, acceleration, torque and strain limits");
  add_common(sense, c, true);
  auto* reproduce = app.add_subcommand("reproduce", "Regenerate a built-in reference figure");
  add_common(reproduce, c, false);
  reproduce->add_option("figure", c.figure, "Figure id")->check(CLI::IsMember({"time_trace"}));
  auto* run = app.add_subcommand("run", "Run several stages in dependency order");
  add_common(run, c, true);
  run->add_option("--stages", c.stages, "Comma-separated stages, e.g. trap,simulate,psd")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    RunContext ctx = make_context(c);
    if (trap->parsed()) run_trap(ctx);
    if (simulate->parsed()) run_simulate(ctx);
    if (psd->parsed()) run_psd(ctx);
    if (calibrate->parsed()) run_calibrate(ctx);
    if (budget->parsed()) run_budget(ctx);
    if (sense->parsed()) run_sense(ctx);
    if (reproduce->parsed()) levisim::app::reproduce(c.figure, ctx);
    if (run->parsed()) {
      for (Stage s : parse_stages(c.stages)) run_stage(s, ctx);
    }
  } catch (const levisim::ConfigError& e) {
    std::cerr << "levisim: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const levisim::ValidityError& e) {
    std::cerr << "levisim: invalid parameters: " << e.what() << "\n";
    return kExitValidity;
  } catch (const levisim::NumericalError& e) {
    std::cerr << "levisim: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "levisim: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
