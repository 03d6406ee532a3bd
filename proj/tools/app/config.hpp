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

// Experiment configuration: TOML ingestion with strict key checking, and a
// canonical JSON form used for sidecars and fingerprints.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "levisim/detection.hpp"
#include "levisim/feedback.hpp"
#include "levisim/model.hpp"
#include "levisim/noise.hpp"

namespace levisim::app {

struct ParticleConfig {
  std::string shape = "sphere";  ///< "sphere" or "disc"
  double radius = 0.0;
  double thickness = 0.0;
  double density = 0.0;
  double refractive_index = 0.0;
  std::optional<double> surface_temperature;
};

struct BeamConfig {
  double power = 0.0;
  double waist = 0.0;
  double wavelength = 0.0;
  std::string geometry = "tweezer";  ///< "tweezer" or "standing_wave"
  std::array<double, 3> polarization{1.0, 0.0, 0.0};
  double xy_asymmetry = 1.0;
  double contrast = 1.0;
  double cavity_length = 0.0;
  double finesse_disc = 0.0;
  double mode_volume = 0.0;
  double linewidth = 0.0;
};

struct GasConfig {
  double pressure = 0.0;  ///< [Pa]
  double temperature = 0.0;
  double viscosity = GasEnvironment::kAirViscosity;
  double molecular_mass = GasEnvironment::kAirMolecularMass;
  double molecular_diameter = GasEnvironment::kAirMolecularDiameter;
  std::string damping = "auto";  ///< "auto", "knudsen", "free_molecular"
};

struct NoiseConfig {
  double gamma_photon = 0.0;
  double Gamma_fb = 0.0;
  double Gamma_other = 0.0;
};

struct SimulationConfig {
  std::optional<double> duration;
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::size_t n_runs = 1;
  std::size_t record_stride = 1;
  std::string initial = "thermal";  ///< "thermal" or "rest"
  std::array<double, 3> x0{};
  std::array<double, 3> v0{};
  bool thermal_noise = true;
  bool recoil = true;
  bool duffing = false;
};

struct PsdConfig {
  std::size_t segment_length = 0;
  double overlap = 0.5;
  std::string window = "hann";
  double fit_omega_min = 0.0;
  double fit_omega_max = 0.0;
};

struct ReadoutConfig {
  std::string axis = "z";
  detection::ReadoutModel model;
};

struct CalibrationConfig {
  std::optional<double> reference_conversion;
  double bias_tolerance = 0.05;
};

struct SensingConfig {
  std::optional<double> bandwidth;
  std::optional<double> measurement_time;
  std::optional<double> temperature;  ///< T_cm; defaults to the gas temperature
  double z_rms = 0.0;
  double q_eff = 0.0;
  double pressure_min = 1e-7;
  double pressure_max = 1e3;
  std::size_t points = 41;
  std::optional<double> gw_frequency;  ///< [Hz]
};

struct ExperimentConfig {
  ParticleConfig particle;
  BeamConfig beam;
  GasConfig gas;
  NoiseConfig noise;
  feedback::Controller feedback;
  ReadoutConfig readout;
  SimulationConfig simulation;
  PsdConfig psd;
  CalibrationConfig calibration;
  SensingConfig sensing;
};

/// Parses TOML text. Throws ConfigError naming the field path and line on
/// syntax errors, missing required fields, wrong types, bad enum values or
/// unknown keys.
ExperimentConfig parse_config(std::string_view toml_text, std::string_view source = "config");

/// Reads and parses a file; throws ConfigError if it cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Built-in configurations by id ("time_trace").
ExperimentConfig builtin_config(std::string_view id);

nlohmann::json to_json(const ExperimentConfig& cfg);

/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string fingerprint(const ExperimentConfig& cfg);

Particle make_particle(const ExperimentConfig& cfg);
Beam make_beam(const ExperimentConfig& cfg);
GasEnvironment make_gas(const ExperimentConfig& cfg);
noise::DampingModel damping_model(const ExperimentConfig& cfg);
Axis parse_axis(std::string_view name);

}  // namespace levisim::app
