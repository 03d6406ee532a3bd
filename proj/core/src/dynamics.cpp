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

#include "levisim/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "levisim/constants.hpp"
#include "levisim/error.hpp"
#include "levisim/rng.hpp"

namespace levisim::dynamics {

using constants::hbar;
using constants::k_B;
using constants::pi;

void EquationOfMotion::validate() const {
  if (!(mass > 0.0)) throw ValidityError("mass must be > 0");
  for (Axis a : kAxes) {
    if (!(omega[index(a)] > 0.0) || !std::isfinite(omega[index(a)])) {
      throw ValidityError("trap frequency along " + std::string(axis_name(a)) + " must be > 0");
    }
    if (!(S_qba[index(a)] >= 0.0)) throw ValidityError("back-action spectra must be >= 0");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ValidityError("damping rate must be >= 0");
  if (!(temperature >= 0.0)) throw ValidityError("temperature must be >= 0");
  if (feedback) feedback->validate();
}

double EquationOfMotion::thermal_psd() const {
  return thermal_noise ? 2.0 * mass * k_B * temperature * gamma : 0.0;
}

double EquationOfMotion::total_damping() const {
  return gamma + (feedback ? feedback->damping_rate() : 0.0);
}

double EquationOfMotion::max_omega() const { return std::max({omega[0], omega[1], omega[2]}); }

Vec3 EquationOfMotion::trap_force(const Vec3& q) const {
  Vec3 f;
  const std::array<double, 3> q2{q.x * q.x, q.y * q.y, q.z * q.z};
  for (std::size_t i = 0; i < 3; ++i) {
    double scale = 1.0;
    if (duffing) {
      scale += duffing->self[i] * q2[i];
      for (std::size_t j = 0; j < 3; ++j) {
        if (j != i) scale += duffing->cross[i][j] * q2[j];
      }
    }
    f[kAxes[i]] = -mass * omega[i] * omega[i] * q[kAxes[i]] * scale;
  }
  return f;
}

double default_time_step(const EquationOfMotion& eom) {
  double scale = 2.0 * pi / eom.max_omega();
  const double g = eom.total_damping();
  if (g > 0.0) scale = std::min(scale, 1.0 / g);
  return scale / 50.0;
}

void check_resolution(const EquationOfMotion& eom, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidityError("time step must be > 0");
  const double limit_omega = 2.0 * pi / (20.0 * eom.max_omega());
  if (dt > limit_omega * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "time step " << dt << " s exceeds 2 pi / (20 Omega_max) = " << limit_omega << " s";
    throw ValidityError(msg.str());
  }
  const double g = eom.total_damping();
  if (g > 0.0 && dt > 1.0 / (20.0 * g) * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "time step " << dt << " s exceeds 1 / (20 gamma) = " << 1.0 / (20.0 * g) << " s";
    throw ValidityError(msg.str());
  }
}

namespace {

bool finite(const Vec3& a) { return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z); }

}  // namespace

Trajectory simulate(const EquationOfMotion& eom, const SimulationOptions& opts) {
  eom.validate();
  const double dt = opts.dt > 0.0 ? opts.dt : default_time_step(eom);
  if (opts.dt < 0.0) throw ValidityError("time step must be > 0");
  if (opts.enforce_resolution) check_resolution(eom, dt);
  if (!(opts.duration >= dt)) throw ValidityError("duration must be at least one time step");
  if (opts.record_stride == 0) throw ValidityError("record stride must be >= 1");

  const auto steps = static_cast<std::size_t>(std::llround(opts.duration / dt));
  const std::size_t stride = opts.record_stride;
  const std::size_t samples = steps / stride + 1;
  const double m = eom.mass;

  std::array<rng::Stream, 3> thermal{rng::Stream(opts.seed, rng::Channel::thermal_x, opts.run),
                                     rng::Stream(opts.seed, rng::Channel::thermal_y, opts.run),
                                     rng::Stream(opts.seed, rng::Channel::thermal_z, opts.run)};
  std::array<rng::Stream, 3> recoil{rng::Stream(opts.seed, rng::Channel::recoil_x, opts.run),
                                    rng::Stream(opts.seed, rng::Channel::recoil_y, opts.run),
                                    rng::Stream(opts.seed, rng::Channel::recoil_z, opts.run)};

  // Exact OU substep for friction and thermal noise.
  const double c1 = std::exp(-eom.gamma * dt);
  const double sigma_th =
      eom.thermal_psd() > 0.0 ? std::sqrt((1.0 - c1 * c1) * k_B * eom.temperature / m) : 0.0;
  std::array<double, 3> sigma_rec{};
  for (std::size_t i = 0; i < 3; ++i) sigma_rec[i] = std::sqrt(eom.S_qba[i] * dt) / m;

  Vec3 q = opts.x0;
  Vec3 v = opts.v0;
  if (opts.initial == InitialState::thermal) {
    rng::Stream init(opts.seed, rng::Channel::initial_conditions, opts.run);
    const double sv = std::sqrt(k_B * eom.temperature / m);
    for (Axis a : kAxes) {
      q[a] = sv / eom.omega[index(a)] * init.normal();
      v[a] = sv * init.normal();
    }
  }

  std::optional<feedback::Loop> loop;
  if (eom.feedback && eom.feedback->kind != feedback::Kind::none) {
    loop.emplace(*eom.feedback, dt, m, opts.seed, opts.run);
  }
  const bool has_external = static_cast<bool>(eom.external);

  Trajectory traj;
  traj.dt = dt * static_cast<double>(stride);
  traj.seed = opts.seed;
  traj.run = opts.run;
  traj.fingerprint = opts.fingerprint;
  for (std::size_t i = 0; i < 3; ++i) {
    traj.q[i].reserve(samples);
    traj.v[i].reserve(samples);
  }
  auto record = [&] {
    for (Axis a : kAxes) {
      traj.q[index(a)].push_back(q[a]);
      traj.v[index(a)].push_back(v[a]);
    }
  };
  record();

  const double half = 0.5 * dt;
  Vec3 f = eom.trap_force(q);
  if (has_external) f += eom.external(0.0, q, v);
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = dt * static_cast<double>(n);
    const Vec3 f_fb = loop ? loop->update(q, v) : Vec3{};
    // B
    v += (half / m) * (f + f_fb);
    // A
    q += half * v;
    // O
    for (Axis a : kAxes) {
      const std::size_t i = index(a);
      double vi = c1 * v[a];
      if (sigma_th > 0.0) vi += sigma_th * thermal[i].normal();
      if (sigma_rec[i] > 0.0) vi += sigma_rec[i] * recoil[i].normal();
      v[a] = vi;
    }
    // A
    q += half * v;
    // B
    f = eom.trap_force(q);
    if (has_external) f += eom.external(t + dt, q, v);
    v += (half / m) * (f + f_fb);

    if (!finite(q) || !finite(v)) {
      std::ostringstream msg;
      msg << "non-finite state at step " << n + 1 << " (t = " << t + dt << " s, run " << opts.run
          << ")";
      throw NumericalError(msg.str());
    }
    if ((n + 1) % stride == 0) record();
  }
  return traj;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(threads, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<Trajectory> ensemble(const EquationOfMotion& eom, const SimulationOptions& opts,
                                 std::size_t n_runs, unsigned threads) {
  if (n_runs == 0) throw ValidityError("ensemble needs at least one run");
  return ensemble_map(eom, opts, n_runs, [](const Trajectory& t) { return t; }, threads);
}

std::vector<double> msd(const Trajectory& traj, Axis axis, std::size_t max_lag) {
  const std::vector<double>& x = traj.position(axis);
  const std::size_t n = x.size();
  if (max_lag * 10 > n) {
    throw ValidityError("MSD lag range exceeds a tenth of the trajectory length");
  }
  std::vector<double> out(max_lag + 1, 0.0);
  for (std::size_t k = 1; k <= max_lag; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) {
      const double d = x[i + k] - x[i];
      acc += d * d;
    }
    out[k] = acc / static_cast<double>(n - k);
  }
  return out;
}

EnergyTrace energy_trace(const Trajectory& traj, const EquationOfMotion& eom) {
  if (eom.duffing) throw ValidityError("energy trace requires a harmonic model");
  EnergyTrace e;
  const std::size_t n = traj.size();
  e.total.assign(n, 0.0);
  for (Axis a : kAxes) {
    const std::size_t i = index(a);
    const double w = eom.omega[i];
    e.energy[i].resize(n);
    e.occupation[i].resize(n);
    for (std::size_t s = 0; s < n; ++s) {
      const double q = traj.q[i][s];
      const double v = traj.v[i][s];
      const double en = 0.5 * eom.mass * (v * v + w * w * q * q);
      e.energy[i][s] = en;
      e.occupation[i][s] = en / (hbar * w);
      e.total[s] += en;
    }
  }
  return e;
}

}  // namespace levisim::dynamics
