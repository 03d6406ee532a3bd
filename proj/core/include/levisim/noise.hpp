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

// Damping and stochastic heating: gas drag across Knudsen regimes, the
// thermal force spectrum, thermalization and photon-recoil rates, and the
// steady-state phonon balance.

#include <array>

#include "levisim/model.hpp"
#include "levisim/optics.hpp"
#include "levisim/vec3.hpp"

namespace levisim::noise {

/// Kn below which the free-molecular expression is flagged.
inline constexpr double kFreeMolecularMinKnudsen = 10.0;

/// Interpolated Stokes/Epstein damping for a sphere,
///   gamma = (6 pi eta R / m) 0.619 / (0.619 + Kn) (1 + c_K),
///   c_K = 0.31 Kn / (0.785 + 1.152 Kn + Kn^2).
/// Energy damping rate [1/s]. Throws ValidityError for discs.
double gas_damping_knudsen(const Particle& p, const GasEnvironment& g);

/// High-vacuum damping, 16 P / (pi vbar rho R) for a sphere and
/// 32 P / (pi vbar rho t) for a disc.
double gas_damping_free_molecular(const Particle& p, const GasEnvironment& g);

/// True when Kn >= 10, i.e. the free-molecular expression applies.
bool free_molecular_regime(const Particle& p, const GasEnvironment& g);

enum class DampingModel { automatic, knudsen, free_molecular };

/// `automatic` uses the Knudsen interpolation for spheres and the
/// free-molecular form for discs.
double gas_damping(const Particle& p, const GasEnvironment& g,
                   DampingModel model = DampingModel::automatic);

/// S_FF = 2 M k_B T gamma [N^2 s], two-sided in angular frequency:
/// <F(t) F(t')> = S_FF delta(t - t').
double thermal_force_psd(const Particle& p, const GasEnvironment& g, double gamma_gas);

/// Gamma_th = gamma k_B T / (hbar Omega) [phonons/s]
double thermalization_rate(double gamma_gas, double temperature, double omega);

/// Photon-recoil heating rate along `axis` for x-polarized light:
///   Gamma_sc = (1/5) (P_scat / M c^2) (omega0 / Omega) for y and z,
/// half that along x. P_scat is evaluated at the focus.
double recoil_heating_rate(const Particle& p, const Beam& b, double omega, Axis axis);

/// Back-action force spectrum matching `recoil_heating_rate`,
/// S = 2 M hbar Omega Gamma_sc = (2/5) hbar omega0 P_scat / c^2 along y and z.
/// Same convention as `thermal_force_psd`.
double recoil_force_psd(const Particle& p, const Beam& b, Axis axis);

/// Alternative nanosphere estimate (2/5)(pi^2 omega0 V / lambda^3)(eps-1)/(eps+2),
/// evaluated exactly as printed. It has no power dependence and is reported
/// alongside the primary estimate without being reconciled with it.
double recoil_heating_rate_secondary(const Particle& p, const Beam& b);

/// Cavity photon-recoil damping for a disc in a standing wave,
///   gamma_sc = (V_c lambda omega0 / 4L) / (F_disc int (eps-1) dV),
/// with omega0 the mechanical trap frequency.
double disc_recoil_rate(const Particle& disc, const Beam& b, double omega0);

/// hbar Omega / k_B [K]
double classicality_threshold(double omega);

/// Gamma_em = 2 pi (1/16) sqrt(T_em / T_gas) gamma_gas. Reported as a
/// separate channel. Throws ValidityError if T_em < T_gas.
double hot_sphere_damping_correction(double t_emission, double t_gas, double gamma_gas);

struct NoiseBudget {
  double gamma_gas = 0.0;     ///< [1/s]
  double gamma_fb = 0.0;      ///< [1/s]
  double gamma_photon = 0.0;  ///< [1/s]
  std::array<double, 3> Gamma_th{};  ///< [phonons/s]
  std::array<double, 3> Gamma_sc{};  ///< [phonons/s]
  double Gamma_fb = 0.0;      ///< [phonons/s]
  double Gamma_other = 0.0;   ///< [phonons/s]
  double S_FF_thermal = 0.0;  ///< [N^2 s]
  std::array<double, 3> S_FF_qba{};  ///< [N^2 s]
};

struct BudgetInputs {
  double gamma_fb = 0.0;
  double gamma_photon = 0.0;
  double Gamma_fb = 0.0;
  double Gamma_other = 0.0;
  DampingModel damping = DampingModel::automatic;
};

/// Assembles every rate for a trapped particle. Throws ValidityError on
/// negative user-supplied rates.
NoiseBudget make_noise_budget(const Particle& p, const Beam& b, const GasEnvironment& g,
                              const optics::TrapFrequencies& f, const BudgetInputs& in = {});

/// n_inf = (Gamma_th + Gamma_fb + Gamma_sc + Gamma_other) /
///         (gamma_gas + gamma_fb + gamma_photon)
/// Throws ValidityError when the denominator vanishes.
double steady_state_phonons(const NoiseBudget& nb, Axis axis);

}  // namespace levisim::noise
