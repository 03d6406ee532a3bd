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

// Rayleigh-regime optical fields and forces: intensity maps, gradient and
// scattering forces, trap frequencies, Duffing coefficients and the dipole
// radiation pattern. The surrounding medium is vacuum (n_med = 1).

#include <array>
#include <cstddef>
#include <iosfwd>

#include "levisim/model.hpp"
#include "levisim/vec3.hpp"

namespace levisim::optics {

enum class RayleighValidity { ok, warning };

inline constexpr double kRayleighWarnThreshold = 0.5;
inline constexpr double kRayleighErrorThreshold = 1.0;

/// xi = 2 pi R / lambda0. For a disc, whose forces come from the volume
/// integral rather than the dipole, R is the half-thickness along the beam.
double size_parameter(const Particle& p, const Beam& b);

/// `warning` above xi = 0.5; throws ValidityError above xi = 1.
RayleighValidity check_rayleigh(const Particle& p, const Beam& b);

/// Position-resolved intensity of a beam.
class IntensityField {
 public:
  explicit IntensityField(const Beam& beam);

  /// [W/m^2], never negative.
  double operator()(const Vec3& r) const;
  /// Analytic gradient [W/m^3].
  Vec3 gradient(const Vec3& r) const;
  /// Analytic second derivatives d^2 I / dq^2 at the focus [W/m^4].
  Vec3 curvature_at_focus() const;

  bool standing_wave() const { return standing_; }
  double peak_intensity() const { return i0_; }
  double waist() const { return w0_; }
  double rayleigh_range() const { return zr_; }
  double wavenumber() const { return k_; }
  double contrast() const { return contrast_; }

 private:
  double gaussian(const Vec3& r) const;

  double i0_;
  double w0_;
  double zr_;
  double k_;
  bool standing_;
  double contrast_;
};

/// Single-tweezer Gaussian intensity profile.
double gaussian_intensity(const Beam& b, const Vec3& r);

/// C_scat = k^4 alpha^2 / (6 pi eps0^2), which for a sphere is
/// (128 pi^5 R^6 / 3 lambda^4) ((n^2-1)/(n^2+2))^2.
double scattering_cross_section(const Particle& p, const Beam& b);

/// Radiation-pressure force C_scat I(r) / c along +z.
Vec3 scattering_force(const Particle& p, const Beam& b, const Vec3& r);

/// Gradient force (alpha / 2 eps0 c) grad I, i.e. (2 pi R^3 / c) CM grad I
/// for a sphere.
Vec3 gradient_force(const Particle& p, const Beam& b, const Vec3& r);

/// Dipole potential whose negative gradient is `gradient_force`.
double dipole_potential(const Particle& p, const Beam& b, const Vec3& r);

struct TrapFrequencies {
  double x;  ///< [rad/s]
  double y;
  double z;

  double operator[](Axis a) const { return a == Axis::x ? x : (a == Axis::y ? y : z); }
  double max() const;
};

/// Harmonic trap frequencies at the focus. Single tweezer spheres use
///   omega_r = sqrt(6 I0 CM / (c rho w0^2)),
///   omega_z = sqrt(3 I0 lambda^2 CM / (c pi^2 rho w0^4));
/// standing waves use the analytic curvature of the two-beam pattern.
/// For a disc the axial frequency comes from the curvature of the volume
/// integral of the intensity; its transverse frequencies use the
/// equal-volume dipole. Omega_x is multiplied by the beam's x/y asymmetry
/// factor.
TrapFrequencies trap_frequencies(const Particle& p, const Beam& b);

/// Cubic corrections to the harmonic restoring force,
///   F_q = -k_q q (1 + self[q] q^2 + sum_{q' != q} cross[q][q'] q'^2),
/// from the fourth-order expansion of the Gaussian potential.
struct DuffingCoefficients {
  std::array<double, 3> stiffness{};  ///< k_q = M Omega_q^2 [N/m]
  std::array<double, 3> self{};       ///< [1/m^2]
  std::array<std::array<double, 3>, 3> cross{};  ///< [1/m^2], zero diagonal
};

/// Single tweezer only; throws ValidityError for standing waves.
DuffingCoefficients duffing_coefficients(const Particle& p, const Beam& b);

/// Time-averaged radiated power per solid angle [W/sr] for a dipole
/// driven at position r. theta is measured from the polarization axis.
double dipole_radiation_pattern(const Particle& p, const Beam& b, double theta, double phi,
                                const Vec3& r = {});

/// Total scattered power C_scat I(r) [W].
double scattered_power(const Particle& p, const Beam& b, const Vec3& r = {});

/// Binding potential of a thin disc centred on the axis at z0:
///   U = -(1/c) integral of I (eps - 1) over the disc volume.
/// Evaluated by Gauss-Legendre quadrature.
double disc_optical_potential(const Particle& disc, const Beam& b, double z0);

/// Axial trap frequency from the curvature of the optical potential at the
/// focus, omega0^2 = (1/M) d^2U/dz^2, by central second differences.
/// Works for spheres (dipole potential) and discs (volume integral).
double axial_frequency_from_potential(const Particle& p, const Beam& b);

struct GridSpec {
  std::array<double, 3> min{};
  std::array<double, 3> max{};
  std::array<std::size_t, 3> points{1, 1, 1};
};

/// CSV with header `x,y,z,I` over a regular grid.
void write_intensity_map(std::ostream& out, const Beam& b, const GridSpec& grid);

}  // namespace levisim::optics
