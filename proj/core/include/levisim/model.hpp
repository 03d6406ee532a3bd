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

// Domain types shared by every module. All quantities are SI; angular
// frequencies are rad/s throughout.

#include <optional>
#include <variant>

#include "levisim/vec3.hpp"

namespace levisim {

struct Sphere {};

/// Thin cylinder whose symmetry axis is the beam axis.
struct Disc {
  double thickness;  ///< [m]
};

using Shape = std::variant<Sphere, Disc>;

/// A levitated dielectric particle. Immutable; construction validates.
class Particle {
 public:
  /// Throws ValidityError if radius <= 0, density <= 0, n < 1, a disc is
  /// thicker than its radius, or a surface temperature is not positive.
  Particle(double radius, double density, double refractive_index, Shape shape = Sphere{},
           std::optional<double> surface_temperature = std::nullopt);

  static Particle sphere(double radius, double density, double refractive_index);
  static Particle disc(double radius, double thickness, double density, double refractive_index);

  double radius() const { return radius_; }
  double density() const { return density_; }
  double refractive_index() const { return refractive_index_; }
  const Shape& shape() const { return shape_; }
  bool is_sphere() const { return std::holds_alternative<Sphere>(shape_); }
  bool is_disc() const { return std::holds_alternative<Disc>(shape_); }
  /// Disc thickness; throws ValidityError for spheres.
  double thickness() const;
  /// Surface (emission) temperature if one was set.
  std::optional<double> surface_temperature() const { return surface_temperature_; }

  double volume() const;
  double mass() const { return density_ * volume(); }
  /// Sphere: (2/5) m R^2. Disc: (1/2) m R^2 about the symmetry axis.
  double moment_of_inertia() const;
  /// Relative permittivity of the particle material, n^2.
  double permittivity() const { return refractive_index_ * refractive_index_; }

 private:
  double radius_;
  double density_;
  double refractive_index_;
  Shape shape_;
  std::optional<double> surface_temperature_;
};

struct SingleTweezer {};

/// Retro-reflected or intracavity standing wave. The reflected field
/// amplitude is `contrast` times the forward one (1 = ideal).
struct StandingWave {
  double cavity_length = 0.0;  ///< L [m]
  double finesse_disc = 0.0;   ///< disc-limited finesse, dimensionless
  double mode_volume = 0.0;    ///< V_c [m^3]
  double linewidth = 0.0;      ///< kappa [rad/s]
  double contrast = 1.0;
};

using BeamGeometry = std::variant<SingleTweezer, StandingWave>;

/// A focused Gaussian laser beam propagating along +z.
class Beam {
 public:
  /// Throws ValidityError on non-positive power/waist/wavelength, a
  /// polarization that is not a unit vector, a non-positive x/y asymmetry,
  /// or a standing-wave contrast outside [0, 1].
  Beam(double power, double waist, double wavelength, BeamGeometry geometry = SingleTweezer{},
       Vec3 polarization = {1.0, 0.0, 0.0}, double xy_asymmetry = 1.0);

  double power() const { return power_; }
  double waist() const { return waist_; }
  double wavelength() const { return wavelength_; }
  const BeamGeometry& geometry() const { return geometry_; }
  bool is_standing_wave() const { return std::holds_alternative<StandingWave>(geometry_); }
  /// Throws ValidityError for a single tweezer.
  const StandingWave& standing_wave() const;
  const Vec3& polarization() const { return polarization_; }
  /// Factor multiplying Omega_x to model the polarization-induced x/y
  /// splitting. 1 keeps the degenerate transverse frequencies.
  double xy_asymmetry() const { return xy_asymmetry_; }

  double rayleigh_range() const;
  /// I0 = 2P / (pi w0^2)
  double peak_intensity() const;
  double wavenumber() const;
  /// Optical angular frequency omega_0 = 2 pi c / lambda.
  double optical_frequency() const;

  Beam with_power(double power) const;

 private:
  double power_;
  double waist_;
  double wavelength_;
  BeamGeometry geometry_;
  Vec3 polarization_;
  double xy_asymmetry_;
};

/// Background gas. Defaults are air at room temperature.
class GasEnvironment {
 public:
  static constexpr double kAirViscosity = 1.85e-5;          // Pa s, 300 K
  static constexpr double kAirMolecularMass = 4.8e-26;      // kg
  static constexpr double kAirMolecularDiameter = 3.7e-10;  // m

  /// Throws ValidityError on pressure < 0 or non-positive temperature,
  /// viscosity, molecular mass or diameter.
  GasEnvironment(double pressure, double temperature, double viscosity = kAirViscosity,
                 double molecular_mass = kAirMolecularMass,
                 double molecular_diameter = kAirMolecularDiameter);

  static GasEnvironment air(double pressure, double temperature = 300.0);

  double pressure() const { return pressure_; }
  double temperature() const { return temperature_; }
  double viscosity() const { return viscosity_; }
  double molecular_mass() const { return molecular_mass_; }
  double molecular_diameter() const { return molecular_diameter_; }
  /// sqrt(8 k_B T / (pi m_gas))
  double mean_speed() const;

  GasEnvironment with_pressure(double pressure) const;

 private:
  double pressure_;
  double temperature_;
  double viscosity_;
  double molecular_mass_;
  double molecular_diameter_;
};

double particle_mass(const Particle& p);

/// Clausius-Mossotti factor (n^2 - 1) / (n^2 + 2) for a particle in vacuum.
double cm_factor(const Particle& p);

struct Polarizability {
  double value;  ///< alpha [C m^2 / V]
  /// Set for non-spherical particles, which are treated as a sphere of
  /// equal volume.
  bool equivalent_volume_approximation;
};

/// alpha = 3 V epsilon0 (n^2 - 1)/(n^2 + 2)
Polarizability polarizability(const Particle& p);

/// Hard-sphere kinetic-theory mean free path k_B T / (sqrt(2) pi d^2 P).
/// Returns +infinity at zero pressure.
double mean_free_path(const GasEnvironment& g);

/// Kn = l / R
double knudsen_number(const Particle& p, const GasEnvironment& g);

}  // namespace levisim
