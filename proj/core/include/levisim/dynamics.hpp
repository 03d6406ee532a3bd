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

// Stochastic centre-of-mass dynamics,
//   q'' + gamma q' + Omega_q^2 q = (F_th + F_qba + F_ext + F_fb) / M,
// integrated with a BAOAB splitting whose friction/noise step is the exact
// Ornstein-Uhlenbeck update.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levisim/feedback.hpp"
#include "levisim/optics.hpp"
#include "levisim/vec3.hpp"

namespace levisim::dynamics {

/// External force F(t, q, v) [N].
using ExternalForce = std::function<Vec3(double t, const Vec3& q, const Vec3& v)>;

struct EquationOfMotion {
  std::array<double, 3> omega{};  ///< Omega_q [rad/s]
  double gamma = 0.0;             ///< gas energy damping rate [1/s]
  double mass = 0.0;              ///< [kg]
  double temperature = 0.0;       ///< bath temperature [K]
  /// Thermal force noise on/off. Its strength is always 2 M k_B T gamma.
  bool thermal_noise = true;
  /// Back-action force spectra per axis [N^2 s].
  std::array<double, 3> S_qba{};
  std::optional<optics::DuffingCoefficients> duffing;
  ExternalForce external;
  std::optional<feedback::Controller> feedback;

  /// Throws ValidityError on M <= 0, Omega <= 0, gamma < 0, T < 0 or
  /// negative spectra.
  void validate() const;
  /// S_FF = 2 M k_B T gamma, or 0 when thermal noise is off.
  double thermal_psd() const;
  /// Gas damping plus linear feedback damping.
  double total_damping() const;
  double max_omega() const;
  /// Conservative trap force, including Duffing terms when present.
  Vec3 trap_force(const Vec3& q) const;
};

enum class InitialState {
  /// Start from `x0`, `v0`.
  given,
  /// Draw q and v from the Boltzmann distribution at the bath temperature.
  thermal,
};

struct SimulationOptions {
  double duration = 0.0;  ///< [s]
  /// Integration step [s]; 0 selects `default_time_step`.
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::uint32_t run = 0;
  InitialState initial = InitialState::given;
  Vec3 x0;
  Vec3 v0;
  /// Store every n-th step.
  std::size_t record_stride = 1;
  /// Enforce dt <= 2 pi / (20 Omega_max) and dt <= 1 / (20 gamma).
  bool enforce_resolution = true;
  std::string fingerprint;
};

struct Trajectory {
  double dt = 0.0;  ///< sample period [s]
  std::array<std::vector<double>, 3> q;
  std::array<std::vector<double>, 3> v;
  std::uint64_t seed = 0;
  std::uint32_t run = 0;
  std::string fingerprint;

  std::size_t size() const { return q[0].size(); }
  double time(std::size_t i) const { return dt * static_cast<double>(i); }
  const std::vector<double>& position(Axis a) const { return q[index(a)]; }
  const std::vector<double>& velocity(Axis a) const { return v[index(a)]; }
};

/// min(2 pi / Omega_max, 1 / gamma_total) / 50
double default_time_step(const EquationOfMotion& eom);

/// Throws ValidityError when dt violates the resolution guard.
void check_resolution(const EquationOfMotion& eom, double dt);

/// Integrates one run. Throws ValidityError on a rejected step size or
/// duration < dt, NumericalError on a non-finite state.
Trajectory simulate(const EquationOfMotion& eom, const SimulationOptions& opts);

/// Runs `body(i)` for i in [0, n) on up to `threads` workers (0 means
/// hardware concurrency). The first exception is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

/// Run r uses stream (opts.seed, opts.run + r). Output order follows r.
std::vector<Trajectory> ensemble(const EquationOfMotion& eom, const SimulationOptions& opts,
                                 std::size_t n_runs, unsigned threads = 0);

/// Like `ensemble` but reduces each trajectory with `fn` as soon as it is
/// produced, so only the results are kept.
template <class Fn>
auto ensemble_map(const EquationOfMotion& eom, const SimulationOptions& opts, std::size_t n_runs,
                  Fn&& fn, unsigned threads = 0) {
  using R = decltype(fn(std::declval<const Trajectory&>()));
  std::vector<R> out(n_runs);
  parallel_for(n_runs, threads, [&](std::size_t r) {
    SimulationOptions o = opts;
    o.run = opts.run + static_cast<std::uint32_t>(r);
    out[r] = fn(simulate(eom, o));
  });
  return out;
}

/// Time-averaged mean square displacement <(q(t + k dt) - q(t))^2> for
/// k = 0 .. max_lag. Throws ValidityError if max_lag exceeds size / 10.
std::vector<double> msd(const Trajectory& traj, Axis axis, std::size_t max_lag);

struct EnergyTrace {
  std::array<std::vector<double>, 3> energy;      ///< per axis [J]
  std::array<std::vector<double>, 3> occupation;  ///< E_q / (hbar Omega_q)
  std::vector<double> total;                      ///< [J]
};

/// Harmonic energy per sample. Throws ValidityError if Duffing terms are on.
EnergyTrace energy_trace(const Trajectory& traj, const EquationOfMotion& eom);

}  // namespace levisim::dynamics
