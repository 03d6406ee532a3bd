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

#include "levisim/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "levisim/constants.hpp"
#include "levisim/error.hpp"

namespace levisim {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidityError(what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

Particle::Particle(double radius, double density, double refractive_index, Shape shape,
                   std::optional<double> surface_temperature)
    : radius_(radius),
      density_(density),
      refractive_index_(refractive_index),
      shape_(shape),
      surface_temperature_(surface_temperature) {
  require(finite_positive(radius), "particle radius must be > 0");
  require(finite_positive(density), "particle density must be > 0");
  require(std::isfinite(refractive_index) && refractive_index >= 1.0,
          "particle refractive index must be >= 1");
  if (const auto* d = std::get_if<Disc>(&shape_)) {
    require(finite_positive(d->thickness) && d->thickness <= radius,
            "disc thickness must satisfy 0 < t <= radius");
  }
  if (surface_temperature_) {
    require(finite_positive(*surface_temperature_), "surface temperature must be > 0");
  }
}

Particle Particle::sphere(double radius, double density, double refractive_index) {
  return Particle(radius, density, refractive_index, Sphere{});
}

Particle Particle::disc(double radius, double thickness, double density, double refractive_index) {
  return Particle(radius, density, refractive_index, Disc{thickness});
}

double Particle::thickness() const {
  if (const auto* d = std::get_if<Disc>(&shape_)) return d->thickness;
  throw ValidityError("thickness is only defined for disc particles");
}

double Particle::volume() const {
  const double r = radius_;
  if (const auto* d = std::get_if<Disc>(&shape_)) return constants::pi * r * r * d->thickness;
  return 4.0 / 3.0 * constants::pi * r * r * r;
}

double Particle::moment_of_inertia() const {
  const double m = mass();
  if (is_disc()) return 0.5 * m * radius_ * radius_;
  return 0.4 * m * radius_ * radius_;
}

Beam::Beam(double power, double waist, double wavelength, BeamGeometry geometry, Vec3 polarization,
           double xy_asymmetry)
    : power_(power),
      waist_(waist),
      wavelength_(wavelength),
      geometry_(geometry),
      polarization_(polarization),
      xy_asymmetry_(xy_asymmetry) {
  require(finite_positive(power), "beam power must be > 0");
  require(finite_positive(waist), "beam waist must be > 0");
  require(finite_positive(wavelength), "beam wavelength must be > 0");
  require(std::abs(norm(polarization) - 1.0) < 1e-9, "polarization must be a unit vector");
  require(finite_positive(xy_asymmetry), "x/y asymmetry factor must be > 0");
  if (const auto* sw = std::get_if<StandingWave>(&geometry_)) {
    require(sw->contrast >= 0.0 && sw->contrast <= 1.0, "standing-wave contrast must lie in [0, 1]");
    require(sw->cavity_length >= 0.0 && sw->finesse_disc >= 0.0 && sw->mode_volume >= 0.0 &&
                sw->linewidth >= 0.0,
            "cavity parameters must be non-negative");
  }
}

const StandingWave& Beam::standing_wave() const {
  if (const auto* sw = std::get_if<StandingWave>(&geometry_)) return *sw;
  throw ValidityError("beam is not a standing wave");
}

double Beam::rayleigh_range() const { return constants::pi * waist_ * waist_ / wavelength_; }

double Beam::peak_intensity() const { return 2.0 * power_ / (constants::pi * waist_ * waist_); }

double Beam::wavenumber() const { return 2.0 * constants::pi / wavelength_; }

double Beam::optical_frequency() const { return 2.0 * constants::pi * constants::c / wavelength_; }

Beam Beam::with_power(double power) const {
  return Beam(power, waist_, wavelength_, geometry_, polarization_, xy_asymmetry_);
}

GasEnvironment::GasEnvironment(double pressure, double temperature, double viscosity,
                               double molecular_mass, double molecular_diameter)
    : pressure_(pressure),
      temperature_(temperature),
      viscosity_(viscosity),
      molecular_mass_(molecular_mass),
      molecular_diameter_(molecular_diameter) {
  require(std::isfinite(pressure) && pressure >= 0.0, "gas pressure must be >= 0");
  require(finite_positive(temperature), "gas temperature must be > 0");
  require(finite_positive(viscosity), "gas viscosity must be > 0");
  require(finite_positive(molecular_mass), "gas molecular mass must be > 0");
  require(finite_positive(molecular_diameter), "gas molecular diameter must be > 0");
}

GasEnvironment GasEnvironment::air(double pressure, double temperature) {
  return GasEnvironment(pressure, temperature);
}

double GasEnvironment::mean_speed() const {
  return std::sqrt(8.0 * constants::k_B * temperature_ / (constants::pi * molecular_mass_));
}

GasEnvironment GasEnvironment::with_pressure(double pressure) const {
  return GasEnvironment(pressure, temperature_, viscosity_, molecular_mass_, molecular_diameter_);
}

double particle_mass(const Particle& p) { return p.mass(); }

double cm_factor(const Particle& p) {
  const double eps = p.permittivity();
  return (eps - 1.0) / (eps + 2.0);
}

Polarizability polarizability(const Particle& p) {
  return {3.0 * p.volume() * constants::epsilon0 * cm_factor(p), !p.is_sphere()};
}

double mean_free_path(const GasEnvironment& g) {
  if (g.pressure() == 0.0) return std::numeric_limits<double>::infinity();
  const double d = g.molecular_diameter();
  return constants::k_B * g.temperature() /
         (std::sqrt(2.0) * constants::pi * d * d * g.pressure());
}

double knudsen_number(const Particle& p, const GasEnvironment& g) {
  return mean_free_path(g) / p.radius();
}

}  // namespace levisim
