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

// Feedback controllers acting on the measured motion and closed-form
// predictions of their cooling performance.

#include <array>
#include <cstdint>
#include <deque>
#include <optional>

#include "levisim/noise.hpp"
#include "levisim/rng.hpp"
#include "levisim/vec3.hpp"

namespace levisim::feedback {

enum class Kind { none, cold_damping, parametric };

enum class VelocityEstimator {
  /// (q_meas[n] - q_meas[n-1]) / dt
  two_point,
  /// The true (delayed) velocity; measurement noise enters positions only.
  ideal,
};

/// Controller parameters. Gains are SI: cold damping C_l [1/s] is a damping
/// rate, parametric C_nl [1/(m^2 s)] so that C_nl q^2 is a rate.
struct Controller {
  Kind kind = Kind::none;
  double gain = 0.0;
  double measurement_delay = 0.0;      ///< [s]
  double measurement_noise_psd = 0.0;  ///< [m^2/Hz], white, per axis
  std::optional<double> force_saturation;  ///< [N], none means unlimited
  VelocityEstimator velocity = VelocityEstimator::two_point;
  std::array<bool, 3> axes{true, true, true};

  /// Throws ValidityError on negative gain, delay, noise or saturation.
  void validate() const;
  /// Linear damping rate contributed along enabled axes (C_l for cold
  /// damping, 0 otherwise).
  double damping_rate() const { return kind == Kind::cold_damping ? gain : 0.0; }
};

/// Feedback error signal: C_l q' for cold damping, C_nl q q' for
/// parametric feedback.
double feedback_signal(const Controller& c, double q, double qdot);

/// Force on one axis from a measured state:
///   cold damping  -M C_l q'
///   parametric    -M C_nl q^2 q'   (stiffness modulated by C_nl q q')
/// clamped to the saturation limit.
double feedback_force(const Controller& c, double q, double qdot, double mass);

/// T_eff = T_gas gamma_g / (gamma_g + gamma_fb). Throws ValidityError if
/// gamma_g <= 0.
double predicted_temperature_cold_damping(double t_gas, double gamma_gas, double gamma_fb);

/// n_inf with gamma_fb = C_l filled into the budget. Requires cold damping.
double phonon_budget_with_feedback(const noise::NoiseBudget& nb, const Controller& c, Axis axis);

/// Per-run measurement chain and controller state: delay line, white
/// position noise and the velocity estimator. Never shared between runs.
class Loop {
 public:
  Loop(const Controller& c, double dt, double mass, std::uint64_t seed, std::uint32_t run);

  /// Records the true state at the current step and returns the force to
  /// hold constant over the step.
  Vec3 update(const Vec3& q, const Vec3& v);

  const Controller& controller() const { return c_; }
  std::size_t delay_steps() const { return delay_steps_; }

 private:
  struct Sample {
    Vec3 q;
    Vec3 v;
  };

  Controller c_;
  double dt_;
  double mass_;
  double noise_sigma_;
  std::size_t delay_steps_;
  std::array<rng::Stream, 3> noise_;
  std::deque<Sample> history_;
};

}  // namespace levisim::feedback
