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

#include "levisim/noise.hpp"

#include <cmath>

#include "levisim/constants.hpp"
#include "levisim/error.hpp"

namespace levisim::noise {

using constants::c;
using constants::hbar;
using constants::k_B;
using constants::pi;

double gas_damping_knudsen(const Particle& p, const GasEnvironment& g) {
  if (!p.is_sphere()) throw ValidityError("Knudsen damping formula applies to spheres only");
  if (g.pressure() == 0.0) return 0.0;
  const double kn = knudsen_number(p, g);
  const double ck = 0.31 * kn / (0.785 + 1.152 * kn + kn * kn);
  const double stokes = 6.0 * pi * g.viscosity() * p.radius() / p.mass();
  return stokes * 0.619 / (0.619 + kn) * (1.0 + ck);
}

double gas_damping_free_molecular(const Particle& p, const GasEnvironment& g) {
  const double vbar = g.mean_speed();
  if (p.is_disc()) return 32.0 * g.pressure() / (pi * vbar * p.density() * p.thickness());
  return 16.0 * g.pressure() / (pi * vbar * p.density() * p.radius());
}

bool free_molecular_regime(const Particle& p, const GasEnvironment& g) {
  return knudsen_number(p, g) >= kFreeMolecularMinKnudsen;
}

double gas_damping(const Particle& p, const GasEnvironment& g, DampingModel model) {
  switch (model) {
    case DampingModel::knudsen: return gas_damping_knudsen(p, g);
    case DampingModel::free_molecular: return gas_damping_free_molecular(p, g);
    case DampingModel::automatic: break;
  }
  return p.is_sphere() ? gas_damping_knudsen(p, g) : gas_damping_free_molecular(p, g);
}

double thermal_force_psd(const Particle& p, const GasEnvironment& g, double gamma_gas) {
  if (gamma_gas < 0.0) throw ValidityError("damping rate must be >= 0");
  return 2.0 * p.mass() * k_B * g.temperature() * gamma_gas;
}

double thermalization_rate(double gamma_gas, double temperature, double omega) {
  if (!(omega > 0.0)) throw ValidityError("oscillator frequency must be > 0");
  return gamma_gas * k_B * temperature / (hbar * omega);
}

namespace {

double axis_weight(Axis axis) { return axis == Axis::x ? 0.5 : 1.0; }

}  // namespace

double recoil_heating_rate(const Particle& p, const Beam& b, double omega, Axis axis) {
  if (!(omega > 0.0)) throw ValidityError("oscillator frequency must be > 0");
  const double pscat = optics::scattered_power(p, b);
  return axis_weight(axis) * 0.2 * pscat / (p.mass() * c * c) * b.optical_frequency() / omega;
}

double recoil_force_psd(const Particle& p, const Beam& b, Axis axis) {
  const double pscat = optics::scattered_power(p, b);
  return axis_weight(axis) * 0.4 * hbar * b.optical_frequency() * pscat / (c * c);
}

double recoil_heating_rate_secondary(const Particle& p, const Beam& b) {
  const double eps = p.permittivity();
  const double lambda = b.wavelength();
  return 0.4 * pi * pi * b.optical_frequency() * p.volume() / (lambda * lambda * lambda) *
         (eps - 1.0) / (eps + 2.0);
}

double disc_recoil_rate(const Particle& disc, const Beam& b, double omega0) {
  const StandingWave& sw = b.standing_wave();
  if (!(sw.cavity_length > 0.0 && sw.mode_volume > 0.0 && sw.finesse_disc > 0.0)) {
    throw ValidityError("disc recoil rate needs cavity length, mode volume and disc finesse > 0");
  }
  const double dielectric_volume = (disc.permittivity() - 1.0) * disc.volume();
  return sw.mode_volume * b.wavelength() * omega0 / (4.0 * sw.cavity_length) /
         (dielectric_volume * sw.finesse_disc);
}

double classicality_threshold(double omega) { return hbar * omega / k_B; }

double hot_sphere_damping_correction(double t_emission, double t_gas, double gamma_gas) {
  if (!(t_gas > 0.0)) throw ValidityError("gas temperature must be > 0");
  if (t_emission < t_gas) throw ValidityError("emission temperature must be >= gas temperature");
  return 2.0 * pi / 16.0 * std::sqrt(t_emission / t_gas) * gamma_gas;
}

NoiseBudget make_noise_budget(const Particle& p, const Beam& b, const GasEnvironment& g,
                              const optics::TrapFrequencies& f, const BudgetInputs& in) {
  if (in.gamma_fb < 0.0 || in.gamma_photon < 0.0 || in.Gamma_fb < 0.0 || in.Gamma_other < 0.0) {
    throw ValidityError("noise budget rates must be >= 0");
  }
  NoiseBudget nb;
  nb.gamma_gas = gas_damping(p, g, in.damping);
  nb.gamma_fb = in.gamma_fb;
  nb.gamma_photon = in.gamma_photon;
  nb.Gamma_fb = in.Gamma_fb;
  nb.Gamma_other = in.Gamma_other;
  nb.S_FF_thermal = thermal_force_psd(p, g, nb.gamma_gas);
  for (Axis a : kAxes) {
    const std::size_t i = index(a);
    nb.Gamma_th[i] = thermalization_rate(nb.gamma_gas, g.temperature(), f[a]);
    nb.Gamma_sc[i] = recoil_heating_rate(p, b, f[a], a);
    nb.S_FF_qba[i] = recoil_force_psd(p, b, a);
  }
  return nb;
}

double steady_state_phonons(const NoiseBudget& nb, Axis axis) {
  const double den = nb.gamma_gas + nb.gamma_fb + nb.gamma_photon;
  if (!(den > 0.0)) throw ValidityError("steady-state occupation needs a damping channel");
  const std::size_t i = index(axis);
  return (nb.Gamma_th[i] + nb.Gamma_fb + nb.Gamma_sc[i] + nb.Gamma_other) / den;
}

}  // namespace levisim::noise
