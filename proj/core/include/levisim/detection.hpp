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

// Optical readout, spectral estimation, Lorentzian fitting and
// volts-to-metres calibration.
//
// PSD convention: two-sided in angular frequency, <q^2> = (1/2pi) int S dw
// over (-inf, inf). Spectra store the non-negative half of the grid.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "levisim/dynamics.hpp"

namespace levisim::detection {

inline constexpr std::string_view kConvention = "two-sided-angular";

struct ReadoutModel {
  double conversion = 1.0;        ///< [V/m]
  double shot_noise_floor = 0.0;  ///< [V^2/Hz], white
  double reference_phase = 0.0;   ///< phi_r [rad]
  double local_oscillator_power = 0.0;  ///< |E_r|^2 [W]
  double signal_power = 0.0;            ///< |E_s|^2 [W]
  double heterodyne_offset = 0.0;       ///< [rad/s], 0 for homodyne
  bool balanced = false;

  /// Throws ValidityError on negative powers or noise floor.
  void validate() const;
};

/// |E_r|^2 + 2 E_r E_s cos(phi_s - phi_r) + |E_s|^2, minus |E_r|^2 when
/// balanced. Amplitudes come from the model powers.
double photodetector_power(const ReadoutModel& rm, double phi_s);

/// Same with explicit field amplitudes.
double photodetector_power(const ReadoutModel& rm, double phi_s, double e_r, double e_s);

/// v(t) = conversion q(t) [cos(offset t)] + white noise with the model's
/// floor. Noise draws use the readout channel of (seed, traj.run).
std::vector<double> synthesize_readout(const dynamics::Trajectory& traj, Axis axis,
                                       const ReadoutModel& rm, std::uint64_t seed);

enum class Window { hann, rectangular };

std::string_view window_name(Window w);
/// Throws ValidityError for unknown names.
Window window_from_name(std::string_view name);

struct WelchOptions {
  /// Samples per segment; 0 picks the largest power of two giving at least
  /// 8 segments.
  std::size_t segment_length = 0;
  double overlap = 0.5;  ///< fraction in [0, 0.9]
  Window window = Window::hann;
  bool detrend_mean = true;
};

struct Spectrum {
  std::vector<double> omega;  ///< [rad/s], strictly increasing from 0
  std::vector<double> psd;    ///< two-sided angular convention
  std::string units = "m^2/Hz";
  std::string convention = std::string(kConvention);
  std::string window = "hann";
  std::size_t segment_length = 0;
  std::size_t segments = 0;
  double overlap = 0.0;
  double sample_rate = 0.0;  ///< [Hz]
  /// Equivalent chi-square degrees of freedom of each bin; 0 if unknown.
  double dof = 0.0;

  std::size_t size() const { return omega.size(); }
  /// (1/2pi) sum S dw over the full two-sided grid.
  double variance() const;
};

/// Largest power of two L with at least 8 half-overlapping segments.
std::size_t default_segment_length(std::size_t n);

/// Averaged modified periodogram. Throws ValidityError on a series shorter
/// than one segment, a segment shorter than 2, or overlap outside [0, 0.9].
Spectrum welch_psd(const std::vector<double>& series, double sample_rate,
                   const WelchOptions& opts = {});

/// S(w) = A gamma / ((w_m^2 - w^2)^2 + w^2 gamma^2) + floor.
/// A thermal oscillator has A = 2 k_B T / M.
double lorentzian_psd(double omega, double amplitude, double omega_m, double gamma, double floor);

struct LorentzianFit {
  double amplitude = 0.0;  ///< A
  double omega_m = 0.0;    ///< [rad/s]
  double gamma = 0.0;      ///< [1/s]
  double floor = 0.0;
  /// Covariance of (A, omega_m, gamma, floor).
  std::array<std::array<double, 4>, 4> covariance{};
  int iterations = 0;
  double residual_rms = 0.0;  ///< in log PSD

  double evaluate(double omega) const;
  /// S(omega_m) - floor = A / (omega_m^2 gamma)
  double peak_height() const;
  /// (1/2pi) int (S - floor) dw = A / (2 omega_m^2)
  double area() const;
  double sigma(std::size_t i) const;
};

struct FitOptions {
  double omega_min = 0.0;  ///< band [rad/s]; 0 means first non-zero bin
  double omega_max = 0.0;  ///< 0 means Nyquist
  int max_iterations = 200;
  /// Subtract the chi-square log bias using the spectrum's dof.
  bool log_bias_correction = true;
  /// Minimum peak-to-floor ratio of the initial estimate.
  double min_peak_to_floor = 3.0;
};

/// Levenberg-Marquardt on log S over log parameters. Throws ValidityError
/// for an unresolved peak and NumericalError on non-convergence.
LorentzianFit lorentzian_fit(const Spectrum& sp, const FitOptions& opts = {});

struct Calibration {
  double conversion = 0.0;  ///< [V/m]
  double uncertainty = 0.0;
  LorentzianFit fit;
  /// The estimate assumes centre-of-mass and gas temperature are equal.
  bool assumes_thermal_equilibrium = true;
  /// conversion / reference when a reference conversion was supplied.
  std::optional<double> bias_ratio;
  /// Set when the bias ratio is inconsistent with 1.
  bool hot_particle_suspected = false;
};

struct CalibrationOptions {
  FitOptions fit;
  /// Independent conversion, e.g. from a calibration at higher pressure.
  std::optional<double> reference_conversion;
  /// Relative deviation from the reference above which the result is
  /// flagged (in addition to exceeding 3 sigma).
  double bias_tolerance = 0.05;
};

/// Equipartition calibration: the fitted area in V^2 is equated to
/// k_B T / (M Omega_m^2), giving conversion = sqrt(A_V M / (2 k_B T)).
Calibration calibrate_volts_to_meters(const Spectrum& voltage, double mass, double temperature,
                                      const CalibrationOptions& opts = {});

}  // namespace levisim::detection
