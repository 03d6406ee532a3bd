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

#include "levisim/optics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "levisim/constants.hpp"
#include "levisim/error.hpp"
#include "levisim/io.hpp"

namespace levisim::optics {

namespace {

using constants::c;
using constants::epsilon0;
using constants::pi;

/// alpha / (2 eps0 c): converts intensity to potential energy.
double gradient_prefactor(const Particle& p) {
  return polarizability(p).value / (2.0 * epsilon0 * c);
}

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(int n) {
  GaussLegendre q;
  q.nodes.resize(static_cast<std::size_t>(n));
  q.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    q.nodes[static_cast<std::size_t>(i)] = x;
    q.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

const GaussLegendre& quadrature() {
  static const GaussLegendre q = gauss_legendre(48);
  return q;
}

}  // namespace

double size_parameter(const Particle& p, const Beam& b) {
  const double a = p.is_disc() ? 0.5 * p.thickness() : p.radius();
  return 2.0 * pi * a / b.wavelength();
}

RayleighValidity check_rayleigh(const Particle& p, const Beam& b) {
  const double xi = size_parameter(p, b);
  if (xi > kRayleighErrorThreshold) {
    throw ValidityError("particle outside Rayleigh regime: size parameter " + std::to_string(xi) +
                        " > 1");
  }
  return xi > kRayleighWarnThreshold ? RayleighValidity::warning : RayleighValidity::ok;
}

IntensityField::IntensityField(const Beam& beam)
    : i0_(beam.peak_intensity()),
      w0_(beam.waist()),
      zr_(beam.rayleigh_range()),
      k_(beam.wavenumber()),
      standing_(beam.is_standing_wave()),
      contrast_(beam.is_standing_wave() ? beam.standing_wave().contrast : 0.0) {}

double IntensityField::gaussian(const Vec3& r) const {
  const double u = 1.0 + r.z * r.z / (zr_ * zr_);
  const double rho2 = r.x * r.x + r.y * r.y;
  return i0_ / u * std::exp(-2.0 * rho2 / (w0_ * w0_ * u));
}

double IntensityField::operator()(const Vec3& r) const {
  const double ig = gaussian(r);
  if (!standing_) return ig;
  const double m = contrast_;
  return ig * (1.0 + m * m + 2.0 * m * std::cos(2.0 * k_ * r.z));
}

Vec3 IntensityField::gradient(const Vec3& r) const {
  const double u = 1.0 + r.z * r.z / (zr_ * zr_);
  const double rho2 = r.x * r.x + r.y * r.y;
  const double ig = gaussian(r);
  const double radial = -4.0 / (w0_ * w0_ * u);
  Vec3 g{ig * radial * r.x, ig * radial * r.y,
         ig * 2.0 * r.z / (zr_ * zr_ * u) * (-1.0 + 2.0 * rho2 / (w0_ * w0_ * u))};
  if (!standing_) return g;
  const double m = contrast_;
  const double f = 1.0 + m * m + 2.0 * m * std::cos(2.0 * k_ * r.z);
  const double df = -4.0 * m * k_ * std::sin(2.0 * k_ * r.z);
  return {f * g.x, f * g.y, f * g.z + ig * df};
}

Vec3 IntensityField::curvature_at_focus() const {
  const double f0 = standing_ ? (1.0 + contrast_) * (1.0 + contrast_) : 1.0;
  const double fzz = standing_ ? -8.0 * contrast_ * k_ * k_ : 0.0;
  const double radial = -4.0 * i0_ / (w0_ * w0_) * f0;
  return {radial, radial, -2.0 * i0_ / (zr_ * zr_) * f0 + i0_ * fzz};
}

double gaussian_intensity(const Beam& b, const Vec3& r) {
  const Beam single(b.power(), b.waist(), b.wavelength(), SingleTweezer{}, b.polarization(),
                    b.xy_asymmetry());
  return IntensityField(single)(r);
}

double scattering_cross_section(const Particle& p, const Beam& b) {
  const double k = b.wavenumber();
  const double alpha = polarizability(p).value;
  return std::pow(k, 4) * alpha * alpha / (6.0 * pi * epsilon0 * epsilon0);
}

Vec3 scattering_force(const Particle& p, const Beam& b, const Vec3& r) {
  return {0.0, 0.0, scattering_cross_section(p, b) * IntensityField(b)(r) / c};
}

Vec3 gradient_force(const Particle& p, const Beam& b, const Vec3& r) {
  return gradient_prefactor(p) * IntensityField(b).gradient(r);
}

double dipole_potential(const Particle& p, const Beam& b, const Vec3& r) {
  return -gradient_prefactor(p) * IntensityField(b)(r);
}

double TrapFrequencies::max() const { return std::max({x, y, z}); }

TrapFrequencies trap_frequencies(const Particle& p, const Beam& b) {
  TrapFrequencies f{};
  if (p.is_sphere() && !b.is_standing_wave()) {
    const double i0 = b.peak_intensity();
    const double cm = cm_factor(p);
    const double rho = p.density();
    const double w0 = b.waist();
    const double lambda = b.wavelength();
    const double wr = std::sqrt(6.0 * i0 * cm / (c * rho * w0 * w0));
    f = {wr, wr,
         std::sqrt(3.0 * i0 * lambda * lambda * cm / (c * pi * pi * rho * w0 * w0 * w0 * w0))};
  } else {
    const Vec3 curv = IntensityField(b).curvature_at_focus();
    const double kappa = gradient_prefactor(p);
    const double m = p.mass();
    f = {std::sqrt(-kappa * curv.x / m), std::sqrt(-kappa * curv.y / m),
         std::sqrt(-kappa * curv.z / m)};
    if (p.is_disc()) f.z = axial_frequency_from_potential(p, b);
  }
  f.x *= b.xy_asymmetry();
  return f;
}

DuffingCoefficients duffing_coefficients(const Particle& p, const Beam& b) {
  if (b.is_standing_wave()) {
    throw ValidityError("Duffing coefficients are defined for a single tweezer only");
  }
  const TrapFrequencies f = trap_frequencies(p, b);
  const double m = p.mass();
  const double w2 = b.waist() * b.waist();
  const double zr2 = b.rayleigh_range() * b.rayleigh_range();

  DuffingCoefficients d;
  d.stiffness = {m * f.x * f.x, m * f.y * f.y, m * f.z * f.z};
  d.self = {-2.0 / w2, -2.0 / w2, -2.0 / zr2};
  d.cross[0] = {0.0, -2.0 / w2, -2.0 / zr2};
  d.cross[1] = {-2.0 / w2, 0.0, -2.0 / zr2};
  d.cross[2] = {-4.0 / w2, -4.0 / w2, 0.0};
  return d;
}

double dipole_radiation_pattern(const Particle& p, const Beam& b, double theta, double /*phi*/,
                                const Vec3& r) {
  const double k = b.wavenumber();
  const double e2 = 2.0 * IntensityField(b)(r) / (c * epsilon0);
  const double alpha = polarizability(p).value;
  const double p2 = alpha * alpha * e2;
  const double s = std::sin(theta);
  return c * c / (32.0 * pi * pi) * std::sqrt(constants::mu0 / epsilon0) * std::pow(k, 4) * p2 *
         s * s;
}

double scattered_power(const Particle& p, const Beam& b, const Vec3& r) {
  return scattering_cross_section(p, b) * IntensityField(b)(r);
}

double disc_optical_potential(const Particle& disc, const Beam& b, double z0) {
  const double t = disc.thickness();
  const double radius = disc.radius();
  const IntensityField field(b);
  const GaussLegendre& q = quadrature();

  // Axisymmetric volume integral: 2 pi int rho drho int dz I(rho, z).
  double integral = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const double rho = 0.5 * radius * (q.nodes[i] + 1.0);
    const double wr = 0.5 * radius * q.weights[i];
    double axial = 0.0;
    for (std::size_t j = 0; j < q.nodes.size(); ++j) {
      const double z = z0 + 0.5 * t * q.nodes[j];
      axial += 0.5 * t * q.weights[j] * field({rho, 0.0, z});
    }
    integral += 2.0 * pi * rho * wr * axial;
  }
  return -(disc.permittivity() - 1.0) / c * integral;
}

double axial_frequency_from_potential(const Particle& p, const Beam& b) {
  auto potential = [&](double z) {
    return p.is_disc() ? disc_optical_potential(p, b, z) : dipole_potential(p, b, {0.0, 0.0, z});
  };
  const double scale = b.is_standing_wave() ? b.wavelength() : b.rayleigh_range();
  const double h = 2e-3 * scale;
  const double u2 = (potential(h) - 2.0 * potential(0.0) + potential(-h)) / (h * h);
  if (!(u2 > 0.0)) throw ValidityError("optical potential has no minimum at the focus");
  return std::sqrt(u2 / p.mass());
}

void write_intensity_map(std::ostream& out, const Beam& b, const GridSpec& grid) {
  for (std::size_t a = 0; a < 3; ++a) {
    if (grid.points[a] == 0) throw ValidityError("intensity map grid needs at least one point");
  }
  const IntensityField field(b);
  auto coord = [&](std::size_t a, std::size_t i) {
    if (grid.points[a] == 1) return grid.min[a];
    return grid.min[a] +
           (grid.max[a] - grid.min[a]) * static_cast<double>(i) / static_cast<double>(grid.points[a] - 1);
  };
  out << "x,y,z,I\n";
  for (std::size_t i = 0; i < grid.points[0]; ++i) {
    for (std::size_t j = 0; j < grid.points[1]; ++j) {
      for (std::size_t k = 0; k < grid.points[2]; ++k) {
        const Vec3 r{coord(0, i), coord(1, j), coord(2, k)};
        out << io::format_double(r.x) << ',' << io::format_double(r.y) << ','
            << io::format_double(r.z) << ',' << io::format_double(field(r)) << '\n';
      }
    }
  }
}

}  // namespace levisim::optics
