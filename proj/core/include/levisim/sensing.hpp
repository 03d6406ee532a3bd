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

// Closed-form sensitivity calculators: force, frequency shift, acceleration,
// torque and gravitational-wave strain.

#include <vector>

namespace levisim::sensing {

/// Measurement bandwidth and averaging time, related by b = 1/(2 dt).
class SensingQuery {
 public:
  /// Throws ValidityError unless b > 0, T_cm > 0, z_rms >= 0, Q_eff >= 0.
  static SensingQuery from_bandwidth(double bandwidth, double t_cm, double z_rms = 0.0,
                                     double q_eff = 0.0);
  static SensingQuery from_measurement_time(double measurement_time, double t_cm,
                                            double z_rms = 0.0, double q_eff = 0.0);

  double bandwidth() const { return bandwidth_; }              ///< [Hz]
  double measurement_time() const { return measurement_time_; }  ///< [s]
  double temperature() const { return t_cm_; }                 ///< [K]
  double z_rms() const { return z_rms_; }                      ///< [m]
  double q_eff() const { return q_eff_; }

 private:
  SensingQuery(double b, double t_cm, double z_rms, double q_eff);

  double bandwidth_;
  double measurement_time_;
  double t_cm_;
  double z_rms_;
  double q_eff_;
};

/// F_min = sqrt(4 k k_B T b / (omega0 Q)) [N]
double force_min_thermal(double stiffness, double temperature, double bandwidth, double omega0,
                         double q);

/// F_lim = sqrt(4 k_B T gamma b M [1 + Gamma_sc / (n_i gamma)]),
/// n_i = k_B T / (hbar Omega0).
double force_min_with_recoil(double mass, double temperature, double gamma_gas, double bandwidth,
                             double gamma_sc, double omega0);

/// |d omega0 / omega0|_min = sqrt(k_B T b / (k omega0 Q_eff z_rms^2)).
/// Throws ValidityError for z_rms <= 0.
double min_frequency_shift(double temperature, double bandwidth, double stiffness, double omega0,
                           double q_eff, double z_rms);

struct Acceleration {
  double si;        ///< [m/s^2]
  double g_units;   ///< [g]
};

/// a = F / M, with g = 9.80665 m/s^2.
Acceleration acceleration_min(double force, double mass);

/// M_min = sqrt(4 k_B T I gamma / dt) [N m]
double torque_min(double temperature, double moment_of_inertia, double gamma, double measurement_time);

/// H(omega) = sqrt(1 + 4 omega^2 / kappa^2); 1 for kappa = inf.
double cavity_response(double omega, double kappa);

struct StrainInputs {
  double mass = 0.0;           ///< [kg]
  double temperature = 0.0;    ///< T_cm [K]
  double gamma_gas = 0.0;      ///< [1/s]
  double bandwidth = 0.0;      ///< [Hz]
  double gamma_sc = 0.0;       ///< disc recoil rate [1/s]
  double cavity_length = 0.0;  ///< L [m]
  double linewidth = 0.0;      ///< kappa [rad/s]; <= 0 treated as infinite
};

/// h = (4 / (omega0^2 L)) sqrt((k_B T gamma b / M)[1 + gamma_sc / (N_i gamma)]) H(omega0),
/// N_i = k_B T / (hbar omega0). Throws ValidityError when cavity parameters
/// are missing.
double strain_limit(const StrainInputs& in, double omega0);

struct StrainPoint {
  double omega;
  double h;
};

/// Strain limit with the trap tuned to each frequency in `omegas`.
std::vector<StrainPoint> strain_curve(const StrainInputs& in, const std::vector<double>& omegas);

struct Resonance {
  bool resonant;
  double detuning;  ///< |Omega_gw - Omega0| [rad/s]
};

/// Resonant when the detuning is within `tolerance` relative to Omega0.
Resonance resonance_response_to_strain(double omega_gw, double omega0, double tolerance = 1e-9);

}  // namespace levisim::sensing
