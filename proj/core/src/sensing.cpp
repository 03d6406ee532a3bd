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

#include "levisim/sensing.hpp"

#include <cmath>
#include <limits>

#include "levisim/constants.hpp"
#include "levisim/error.hpp"

namespace levisim::sensing {

using constants::hbar;
using constants::k_B;

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidityError(std::string(what) + " must be > 0");
}

}  // namespace

SensingQuery::SensingQuery(double b, double t_cm, double z_rms, double q_eff)
    : bandwidth_(b), measurement_time_(1.0 / (2.0 * b)), t_cm_(t_cm), z_rms_(z_rms), q_eff_(q_eff) {
  require_positive(b, "bandwidth");
  require_positive(t_cm, "centre-of-mass temperature");
  if (!(z_rms >= 0.0)) throw ValidityError("drive amplitude must be >= 0");
  if (!(q_eff >= 0.0)) throw ValidityError("effective Q must be >= 0");
}

SensingQuery SensingQuery::from_bandwidth(double bandwidth, double t_cm, double z_rms, double q_eff) {
  return SensingQuery(bandwidth, t_cm, z_rms, q_eff);
}

SensingQuery SensingQuery::from_measurement_time(double measurement_time, double t_cm,
                                                 double z_rms, double q_eff) {
  require_positive(measurement_time, "measurement time");
  return SensingQuery(1.0 / (2.0 * measurement_time), t_cm, z_rms, q_eff);
}

double force_min_thermal(double stiffness, double temperature, double bandwidth, double omega0,
                         double q) {
  require_positive(stiffness, "stiffness");
  require_positive(temperature, "temperature");
  require_positive(bandwidth, "bandwidth");
  require_positive(omega0, "frequency");
  require_positive(q, "quality factor");
  return std::sqrt(4.0 * stiffness * k_B * temperature * bandwidth / (omega0 * q));
}

double force_min_with_recoil(double mass, double temperature, double gamma_gas, double bandwidth,
                             double gamma_sc, double omega0) {
  require_positive(mass, "mass");
  require_positive(temperature, "temperature");
  require_positive(bandwidth, "bandwidth");
  require_positive(omega0, "frequency");
  if (!(gamma_gas >= 0.0) || !(gamma_sc >= 0.0)) throw ValidityError("rates must be >= 0");
  const double n_i = k_B * temperature / (hbar * omega0);
  // gamma [1 + Gamma_sc / (n_i gamma)] = gamma + Gamma_sc / n_i, finite at gamma = 0.
  const double effective = gamma_gas + gamma_sc / n_i;
  return std::sqrt(4.0 * k_B * temperature * effective * bandwidth * mass);
}

double min_frequency_shift(double temperature, double bandwidth, double stiffness, double omega0,
                           double q_eff, double z_rms) {
  if (!(z_rms > 0.0)) throw ValidityError("frequency-shift sensing needs a drive amplitude > 0");
  require_positive(temperature, "temperature");
  require_positive(bandwidth, "bandwidth");
  require_positive(stiffness, "stiffness");
  require_positive(omega0, "frequency");
  require_positive(q_eff, "effective Q");
  return std::sqrt(k_B * temperature * bandwidth / (stiffness * omega0 * q_eff * z_rms * z_rms));
}

Acceleration acceleration_min(double force, double mass) {
  require_positive(mass, "mass");
  const double a = force / mass;
  return {a, a / constants::g_n};
}

double torque_min(double temperature, double moment_of_inertia, double gamma,
                  double measurement_time) {
  require_positive(temperature, "temperature");
  require_positive(moment_of_inertia, "moment of inertia");
  require_positive(gamma, "damping rate");
  require_positive(measurement_time, "measurement time");
  return std::sqrt(4.0 * k_B * temperature * moment_of_inertia * gamma) /
         std::sqrt(measurement_time);
}

double cavity_response(double omega, double kappa) {
  if (!(kappa > 0.0) || std::isinf(kappa)) return 1.0;
  return std::sqrt(1.0 + 4.0 * omega * omega / (kappa * kappa));
}

double strain_limit(const StrainInputs& in, double omega0) {
  if (!(in.cavity_length > 0.0)) throw ValidityError("strain limit needs a cavity length > 0");
  require_positive(in.mass, "mass");
  require_positive(in.temperature, "temperature");
  require_positive(in.bandwidth, "bandwidth");
  require_positive(omega0, "frequency");
  if (!(in.gamma_gas >= 0.0) || !(in.gamma_sc >= 0.0)) throw ValidityError("rates must be >= 0");
  const double n_i = k_B * in.temperature / (hbar * omega0);
  const double effective = in.gamma_gas + in.gamma_sc / n_i;
  const double root = std::sqrt(k_B * in.temperature * effective * in.bandwidth / in.mass);
  return 4.0 / (omega0 * omega0 * in.cavity_length) * root * cavity_response(omega0, in.linewidth);
}

std::vector<StrainPoint> strain_curve(const StrainInputs& in, const std::vector<double>& omegas) {
  std::vector<StrainPoint> out;
  out.reserve(omegas.size());
  for (double w : omegas) out.push_back({w, strain_limit(in, w)});
  return out;
}

Resonance resonance_response_to_strain(double omega_gw, double omega0, double tolerance) {
  require_positive(omega_gw, "gravitational-wave frequency");
  require_positive(omega0, "trap frequency");
  const double detuning = std::abs(omega_gw - omega0);
  return {detuning <= tolerance * omega0, detuning};
}

}  // namespace levisim::sensing
