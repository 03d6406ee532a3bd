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

#include "levisim/feedback.hpp"

#include <algorithm>
#include <cmath>

#include "levisim/error.hpp"

namespace levisim::feedback {

void Controller::validate() const {
  if (!(gain >= 0.0) || !std::isfinite(gain)) throw ValidityError("feedback gain must be >= 0");
  if (!(measurement_delay >= 0.0)) throw ValidityError("measurement delay must be >= 0");
  if (!(measurement_noise_psd >= 0.0)) throw ValidityError("measurement noise PSD must be >= 0");
  if (force_saturation && !(*force_saturation > 0.0)) {
    throw ValidityError("force saturation must be > 0");
  }
}

double feedback_signal(const Controller& c, double q, double qdot) {
  switch (c.kind) {
    case Kind::cold_damping: return c.gain * qdot;
    case Kind::parametric: return c.gain * q * qdot;
    case Kind::none: break;
  }
  return 0.0;
}

double feedback_force(const Controller& c, double q, double qdot, double mass) {
  double f = 0.0;
  switch (c.kind) {
    case Kind::cold_damping: f = -mass * feedback_signal(c, q, qdot); break;
    case Kind::parametric: f = -mass * q * feedback_signal(c, q, qdot); break;
    case Kind::none: return 0.0;
  }
  if (c.force_saturation) f = std::clamp(f, -*c.force_saturation, *c.force_saturation);
  return f;
}

double predicted_temperature_cold_damping(double t_gas, double gamma_gas, double gamma_fb) {
  if (!(gamma_gas > 0.0)) throw ValidityError("gas damping rate must be > 0");
  if (gamma_fb < 0.0) throw ValidityError("feedback damping rate must be >= 0");
  return t_gas * gamma_gas / (gamma_gas + gamma_fb);
}

double phonon_budget_with_feedback(const noise::NoiseBudget& nb, const Controller& c, Axis axis) {
  if (c.kind != Kind::cold_damping) {
    throw ValidityError("phonon budget with feedback requires a cold-damping controller");
  }
  noise::NoiseBudget with_fb = nb;
  with_fb.gamma_fb = c.gain;
  return noise::steady_state_phonons(with_fb, axis);
}

namespace {

std::array<rng::Stream, 3> measurement_streams(std::uint64_t seed, std::uint32_t run) {
  return {rng::Stream(seed, rng::Channel::measurement_x, run),
          rng::Stream(seed, rng::Channel::measurement_y, run),
          rng::Stream(seed, rng::Channel::measurement_z, run)};
}

}  // namespace

Loop::Loop(const Controller& c, double dt, double mass, std::uint64_t seed, std::uint32_t run)
    : c_(c),
      dt_(dt),
      mass_(mass),
      noise_sigma_(std::sqrt(c.measurement_noise_psd / dt)),
      delay_steps_(static_cast<std::size_t>(std::llround(c.measurement_delay / dt))),
      noise_(measurement_streams(seed, run)) {
  c_.validate();
  if (!(dt > 0.0)) throw ValidityError("feedback loop time step must be > 0");
}

Vec3 Loop::update(const Vec3& q, const Vec3& v) {
  Sample s{q, v};
  if (noise_sigma_ > 0.0) {
    for (Axis a : kAxes) s.q[a] += noise_sigma_ * noise_[index(a)].normal();
  }
  history_.push_back(s);
  const std::size_t needed = delay_steps_ + 2;
  while (history_.size() > needed) history_.pop_front();

  Vec3 force;
  if (c_.kind == Kind::none || history_.size() <= delay_steps_) return force;
  const std::size_t cur = history_.size() - 1 - delay_steps_;
  const Sample& now = history_[cur];
  for (Axis a : kAxes) {
    if (!c_.axes[index(a)]) continue;
    double qdot = now.v[a];
    if (c_.velocity == VelocityEstimator::two_point) {
      if (cur == 0) continue;
      qdot = (now.q[a] - history_[cur - 1].q[a]) / dt_;
    }
    force[a] = feedback_force(c_, now.q[a], qdot, mass_);
  }
  return force;
}

}  // namespace levisim::feedback
