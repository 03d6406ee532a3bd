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

#include <numbers>

namespace levisim {

/// CODATA 2018 values in SI units.
struct PhysicalConstants {
  double c;         ///< speed of light [m/s]
  double k_B;       ///< Boltzmann constant [J/K]
  double hbar;      ///< reduced Planck constant [J s]
  double epsilon0;  ///< vacuum permittivity [F/m]
  double mu0;       ///< vacuum permeability [N/A^2]
};

inline constexpr PhysicalConstants kConstants{
    299792458.0,
    1.380649e-23,
    1.054571817e-34,
    8.8541878128e-12,
    1.25663706212e-6,
};

namespace constants {
inline constexpr double c = kConstants.c;
inline constexpr double k_B = kConstants.k_B;
inline constexpr double hbar = kConstants.hbar;
inline constexpr double epsilon0 = kConstants.epsilon0;
inline constexpr double mu0 = kConstants.mu0;
/// Standard gravity, used only for acceleration unit conversion.
inline constexpr double g_n = 9.80665;
inline constexpr double pi = std::numbers::pi;
}  // namespace constants

namespace units {

inline constexpr double hz_to_rad_s(double f) { return 2.0 * std::numbers::pi * f; }
inline constexpr double rad_s_to_hz(double omega) { return omega / (2.0 * std::numbers::pi); }
inline constexpr double mbar_to_pa(double p) { return 100.0 * p; }
inline constexpr double torr_to_pa(double p) { return p * 101325.0 / 760.0; }
inline constexpr double pa_to_mbar(double p) { return p / 100.0; }

}  // namespace units
}  // namespace levisim
