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

// Acceptance checks. `levisim_acceptance N` runs criterion N, no argument
// runs all of them. Each criterion prints one PASS/FAIL line; the exit
// status is non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "levisim/detection.hpp"
#include "levisim/dynamics.hpp"
#include "levisim/feedback.hpp"
#include "levisim/model.hpp"
#include "levisim/noise.hpp"
#include "levisim/optics.hpp"
#include "levisim/sensing.hpp"
#include "oracles.hpp"

#if LEVISIM_WITH_APP
#include "app/config.hpp"
#include "app/pipeline.hpp"
#endif

namespace {

using namespace levisim;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double rel(double value, double expected) { return std::abs(value / expected - 1.0); }

// Silica sphere of 200 nm diameter in a 1 W, 2 um, 1550 nm tweezer.
Particle reference_sphere(double density = 2200.0) { return Particle::sphere(100e-9, density, 1.45); }
Beam reference_beam() { return Beam(1.0, 2e-6, 1550e-9); }

dynamics::EquationOfMotion reference_eom(double pressure) {
  const Particle p = reference_sphere();
  const Beam b = reference_beam();
  const GasEnvironment g = GasEnvironment::air(pressure, 300.0);
  const auto f = optics::trap_frequencies(p, b);
  dynamics::EquationOfMotion eom;
  eom.omega = {f.x, f.y, f.z};
  eom.gamma = noise::gas_damping(p, g);
  eom.mass = p.mass();
  eom.temperature = 300.0;
  return eom;
}

// Ensemble-averaged Welch spectra per axis, skipping `burn` seconds of
// each run.
struct EnsembleSpectra {
  std::array<detection::Spectrum, 3> spectra;
  std::array<double, 3> variance{};  ///< <q^2> after burn-in
};

EnsembleSpectra ensemble_spectra(const dynamics::EquationOfMotion& eom, dynamics::SimulationOptions opts,
                                 std::size_t runs, double burn, std::size_t segment) {
  struct PerRun {
    std::array<detection::Spectrum, 3> sp;
    std::array<double, 3> msq{};
  };
  const auto per_run = dynamics::ensemble_map(eom, opts, runs, [&](const dynamics::Trajectory& t) {
    PerRun r;
    const auto skip = static_cast<std::size_t>(burn / t.dt);
    for (Axis a : kAxes) {
      const auto& q = t.position(a);
      std::vector<double> tail(q.begin() + static_cast<std::ptrdiff_t>(skip), q.end());
      double s = 0.0;
      for (double v : tail) s += v * v;
      r.msq[index(a)] = s / static_cast<double>(tail.size());
      detection::WelchOptions w;
      w.segment_length = segment;
      r.sp[index(a)] = detection::welch_psd(tail, 1.0 / t.dt, w);
    }
    return r;
  });
  EnsembleSpectra out;
  for (std::size_t i = 0; i < 3; ++i) {
    detection::Spectrum acc = per_run.front().sp[i];
    acc.dof = 0.0;
    std::fill(acc.psd.begin(), acc.psd.end(), 0.0);
    acc.segments = 0;
    for (const auto& r : per_run) {
      for (std::size_t k = 0; k < acc.psd.size(); ++k) acc.psd[k] += r.sp[i].psd[k];
      acc.dof += r.sp[i].dof;
      acc.segments += r.sp[i].segments;
      out.variance[i] += r.msq[i];
    }
    for (double& v : acc.psd) v /= static_cast<double>(runs);
    out.variance[i] /= static_cast<double>(runs);
    out.spectra[i] = std::move(acc);
  }
  return out;
}

detection::LorentzianFit fit_axis(const detection::Spectrum& sp, double omega) {
  detection::FitOptions fo;
  fo.omega_min = omega / 2.0;
  fo.omega_max = 2.0 * omega;
  return detection::lorentzian_fit(sp, fo);
}

Outcome c1_reference_frequencies() {
  const Beam b = reference_beam();
  const auto f = optics::trap_frequencies(reference_sphere(), b);
  const double ratio = f.y / f.z;
  const double reference_ratio = 43.025 / 7.505;
  const double closed = std::sqrt(2.0) * oracle::pi * b.waist() / b.wavelength();
  const bool ratio_ok = rel(ratio, reference_ratio) < 5e-3 && rel(ratio, closed) < 1e-12;
  double worst = 0.0;
  double worst_rho = 0.0;
  for (int i = 0; i <= 80; ++i) {
    const double rho = 1850.0 + 10.0 * i;
    const double fz = optics::trap_frequencies(reference_sphere(rho), b).z / (2.0 * oracle::pi);
    const double e = rel(fz, 7.505e3);
    if (e > worst) {
      worst = e;
      worst_rho = rho;
    }
  }
  const bool abs_ok = worst < 0.25;
  return {ratio_ok && abs_ok,
          "Omega_y/Omega_z = " + fmt("%.4f", ratio) + " vs 5.733 (" + fmt("%.3f", 100 * rel(ratio, reference_ratio)) +
              "%); worst omega_z/2pi error over density " + fmt("%.1f", 100 * worst) + "% at " +
              fmt("%.0f", worst_rho) + " kg/m^3 (limit 25%)"};
}

Outcome c2_equipartition() {
  const auto eom = reference_eom(100.0);
  dynamics::SimulationOptions o;
  o.duration = 200.0 / eom.gamma;
  o.seed = 2;
  o.initial = dynamics::InitialState::thermal;
  o.record_stride = 4;
  const std::size_t runs = 400;
  const auto msq = dynamics::ensemble_map(eom, o, runs, [](const dynamics::Trajectory& t) {
    std::array<double, 3> s{};
    for (Axis a : kAxes) {
      for (double v : t.position(a)) s[index(a)] += v * v;
      s[index(a)] /= static_cast<double>(t.size());
    }
    return s;
  });
  double worst = 0.0;
  std::string detail;
  for (Axis a : kAxes) {
    double mean = 0.0;
    for (const auto& s : msq) mean += s[index(a)];
    mean /= static_cast<double>(runs);
    const double w = eom.omega[index(a)];
    const double expected = oracle::kB * 300.0 / (eom.mass * w * w);
    worst = std::max(worst, rel(mean, expected));
    detail += std::string(axis_name(a)) + " " + fmt("%.2f", 100 * rel(mean, expected)) + "% ";
  }
  return {worst < 0.02, "<q^2> vs k_B T/(M Omega^2): " + detail + "(" + std::to_string(runs) +
                            " runs x 200 damping times, limit 2%)"};
}

Outcome c3_psd_round_trip() {
  const auto eom = reference_eom(100.0);
  dynamics::SimulationOptions o;
  o.duration = 0.5;
  o.seed = 3;
  o.initial = dynamics::InitialState::thermal;
  o.record_stride = 5;
  const auto es = ensemble_spectra(eom, o, 64, 0.0, 16384);
  bool ok = true;
  std::string detail;
  for (Axis a : kAxes) {
    const double w = eom.omega[index(a)];
    const auto fit = fit_axis(es.spectra[index(a)], w);
    const double peak = w * w * fit.peak_height();
    const double expected_peak = 2.0 * oracle::kB * 300.0 / (eom.mass * eom.gamma);
    const double ew = rel(fit.omega_m, w);
    const double eg = rel(fit.gamma, eom.gamma);
    const double ep = rel(peak, expected_peak);
    ok = ok && ew < 0.01 && eg < 0.05 && ep < 0.05;
    detail += std::string(axis_name(a)) + ": Omega " + fmt("%.3f", 100 * ew) + "%, gamma " +
              fmt("%.2f", 100 * eg) + "%, peak " + fmt("%.2f", 100 * ep) + "%; ";
  }
  return {ok, detail + "limits 1%/5%/5%"};
}

Outcome c4_ballistic() {
  const auto eom = reference_eom(100.0);
  dynamics::SimulationOptions o;
  o.duration = 0.02;
  o.seed = 4;
  o.initial = dynamics::InitialState::thermal;
  const std::size_t runs = 100;
  struct Stats {
    std::array<std::array<double, 4>, 3> msd{};
    std::array<double, 3> v2{};
    std::array<double, 3> v4{};
    double dt = 0.0;
  };
  const auto stats = dynamics::ensemble_map(eom, o, runs, [](const dynamics::Trajectory& t) {
    Stats s;
    s.dt = t.dt;
    for (Axis a : kAxes) {
      const auto m = dynamics::msd(t, a, 3);
      for (std::size_t k = 0; k < 4; ++k) s.msd[index(a)][k] = m[k];
      for (double v : t.velocity(a)) {
        s.v2[index(a)] += v * v;
        s.v4[index(a)] += v * v * v * v;
      }
      s.v2[index(a)] /= static_cast<double>(t.size());
      s.v4[index(a)] /= static_cast<double>(t.size());
    }
    return s;
  });
  const double kt_m = oracle::kB * 300.0 / eom.mass;
  const double dt = stats.front().dt;
  bool ok = true;
  std::string detail;
  for (Axis a : kAxes) {
    const std::size_t i = index(a);
    // msd / tau^2 is linear in tau at short lags; the intercept is k_B T / M.
    std::vector<double> tau;
    std::vector<double> ratio;
    for (std::size_t k = 1; k <= 3; ++k) {
      double m = 0.0;
      for (const auto& s : stats) m += s.msd[i][k];
      m /= static_cast<double>(runs);
      const double t = dt * static_cast<double>(k);
      tau.push_back(t);
      ratio.push_back(m / (t * t));
    }
    const double coeff = oracle::fit_line(tau, ratio).intercept;
    double v2 = 0.0;
    double v4 = 0.0;
    for (const auto& s : stats) {
      v2 += s.v2[i];
      v4 += s.v4[i];
    }
    v2 /= static_cast<double>(runs);
    v4 /= static_cast<double>(runs);
    const double e_msd = rel(coeff, kt_m);
    const double e_v = rel(std::sqrt(v2), std::sqrt(kt_m));
    const double kurtosis = v4 / (v2 * v2);
    ok = ok && e_msd < 0.05 && e_v < 0.03 && std::abs(kurtosis - 3.0) < 0.3;
    detail += std::string(axis_name(a)) + ": MSD coeff " + fmt("%.2f", 100 * e_msd) + "%, v_rms " +
              fmt("%.2f", 100 * e_v) + "%, kurtosis " + fmt("%.3f", kurtosis) + "; ";
  }
  return {ok, detail + "limits 5%/3%"};
}

Outcome c5_relaxation() {
  const auto eom = reference_eom(100.0);
  dynamics::SimulationOptions o;
  o.duration = 2.0 / eom.gamma;
  o.seed = 5;
  o.initial = dynamics::InitialState::given;
  o.record_stride = 10;
  const std::size_t runs = 8000;
  const auto energies = dynamics::ensemble_map(eom, o, runs, [&](const dynamics::Trajectory& t) {
    return dynamics::energy_trace(t, eom).total;
  });
  const std::size_t n = energies.front().size();
  std::vector<double> mean(n, 0.0);
  for (const auto& e : energies)
    for (std::size_t k = 0; k < n; ++k) mean[k] += e[k];
  const double e_inf = 3.0 * oracle::kB * 300.0;
  const double sample_dt = dynamics::default_time_step(eom) * static_cast<double>(o.record_stride);
  std::vector<double> t;
  std::vector<double> y;
  for (std::size_t k = 1; k < n; ++k) {
    const double frac = mean[k] / static_cast<double>(runs) / e_inf;
    if (frac > 0.8) break;
    t.push_back(sample_dt * static_cast<double>(k));
    y.push_back(std::log(1.0 - frac));
  }
  const double rate = -oracle::fit_line(t, y).slope;
  const double e = rel(rate, eom.gamma);
  return {e < 0.05, "fitted energy relaxation rate " + fmt("%.1f", rate) + " 1/s vs gamma_g " +
                        fmt("%.1f", eom.gamma) + " 1/s (" + fmt("%.2f", 100 * e) + "%, " +
                        std::to_string(runs) + " runs, limit 5%)"};
}

Outcome c6_recoil() {
  const Particle p = reference_sphere();
  const Beam b = reference_beam();
  const auto f = optics::trap_frequencies(p, b);
  auto eom = reference_eom(100.0);
  eom.gamma = 0.0;
  eom.thermal_noise = false;
  std::array<double, 3> expected{};
  for (Axis a : kAxes) {
    eom.S_qba[index(a)] = noise::recoil_force_psd(p, b, a);
    expected[index(a)] = noise::recoil_heating_rate(p, b, f[a], a);
  }
  // Anisotropy of the rate formulas at a common frequency.
  const double w = 1e5;
  const double gx = noise::recoil_heating_rate(p, b, w, Axis::x);
  const double gy = noise::recoil_heating_rate(p, b, w, Axis::y);
  const double gz = noise::recoil_heating_rate(p, b, w, Axis::z);
  const bool aniso = std::abs(gy / gx - 2.0) < 1e-12 && std::abs(gz / gx - 2.0) < 1e-12 &&
                     std::abs(eom.S_qba[1] / eom.S_qba[0] - 2.0) < 1e-12 &&
                     std::abs(eom.S_qba[2] / eom.S_qba[0] - 2.0) < 1e-12;

  dynamics::SimulationOptions o;
  o.duration = 2e-3;
  o.seed = 6;
  o.record_stride = 100;
  const std::size_t runs = 2000;
  const auto occ = dynamics::ensemble_map(eom, o, runs, [&](const dynamics::Trajectory& t) {
    return dynamics::energy_trace(t, eom).occupation;
  });
  const double sample_dt = dynamics::default_time_step(eom) * static_cast<double>(o.record_stride);
  bool ok = aniso;
  std::string detail;
  for (Axis a : kAxes) {
    const std::size_t i = index(a);
    // Least-squares slope through the origin of the mean occupation.
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < occ.front()[i].size(); ++k) {
      double m = 0.0;
      for (const auto& r : occ) m += r[i][k];
      m /= static_cast<double>(runs);
      const double t = sample_dt * static_cast<double>(k);
      num += t * m;
      den += t * t;
    }
    const double e = rel(num / den, expected[i]);
    ok = ok && e < 0.10;
    detail += std::string(axis_name(a)) + " " + fmt("%.2f", 100 * e) + "% ";
  }
  return {ok, "phonon growth vs Gamma_sc: " + detail + "(limit 10%); 1:2:2 anisotropy " +
                  (aniso ? "exact" : "violated")};
}

Outcome c7_cold_damping() {
  const auto base = reference_eom(100.0);
  bool ok = true;
  std::string detail;
  for (double factor : {1.0, 3.0, 10.0}) {
    auto eom = base;
    feedback::Controller c;
    c.kind = feedback::Kind::cold_damping;
    c.gain = factor * base.gamma;
    c.velocity = feedback::VelocityEstimator::ideal;
    eom.feedback = c;
    const double total = base.gamma + c.gain;
    dynamics::SimulationOptions o;
    o.duration = 0.3;
    o.seed = 7;
    o.initial = dynamics::InitialState::given;
    o.record_stride = 5;
    const auto es = ensemble_spectra(eom, o, 12, 20.0 / total, 8192);
    const double t_pred = feedback::predicted_temperature_cold_damping(300.0, base.gamma, c.gain);
    double worst_t = 0.0;
    double worst_g = 0.0;
    for (Axis a : kAxes) {
      const double w = eom.omega[index(a)];
      const double t_eff = eom.mass * w * w * es.variance[index(a)] / oracle::kB;
      worst_t = std::max(worst_t, rel(t_eff, t_pred));
      const auto fit = fit_axis(es.spectra[index(a)], w);
      worst_g = std::max(worst_g, rel(fit.gamma, total));
    }
    ok = ok && worst_t < 0.05 && worst_g < 0.05;
    detail += "gamma_fb=" + fmt("%.0f", factor) + "gamma_g: T_eff " + fmt("%.2f", 100 * worst_t) +
              "%, linewidth " + fmt("%.2f", 100 * worst_g) + "%; ";
  }
  return {ok, detail + "worst axis, limit 5%"};
}

Outcome c8_sensitivity() {
  std::mt19937_64 g(8);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double m = oracle::log_uniform(g, 1e-20, 1e-12);
    const double t = oracle::log_uniform(g, 1e-3, 1e3);
    const double gamma = oracle::log_uniform(g, 1e-9, 1e5);
    const double b = oracle::log_uniform(g, 1e-4, 1e3);
    const double w = oracle::log_uniform(g, 1e2, 1e7);
    const double a = sensing::force_min_thermal(m * w * w, t, b, w, w / gamma);
    const double c = sensing::force_min_with_recoil(m, t, gamma, b, 0.0, w);
    worst = std::max(worst, rel(a, c));
  }
  // 300 nm diameter silica at 5e-6 Torr, 300 K, 1 Hz bandwidth.
  const Particle p = Particle::sphere(150e-9, 2200.0, 1.45);
  const GasEnvironment gas = GasEnvironment::air(5e-6 * 133.322, 300.0);
  const double gamma = noise::gas_damping(p, gas);
  const double f = sensing::force_min_with_recoil(p.mass(), 300.0, gamma, 1.0, 0.0, 1e5);
  const double hand = std::sqrt(4.0 * oracle::kB * 300.0 * p.mass() * 16.0 * gas.pressure() /
                                (oracle::pi * oracle::mean_speed(300.0) * 2200.0 * 150e-9));
  const double e = rel(f, hand);
  return {worst < 1e-12 && e < 0.30,
          "F_min vs F_lim worst relative difference " + fmt("%.2e", worst) + " over 10000 draws; floor " +
              fmt("%.3e", f) + " N/rtHz vs hand oracle " + fmt("%.3e", hand) + " (" + fmt("%.2f", 100 * e) +
              "%, limit 30%)"};
}

Outcome c9_strain() {
  StandingWave sw;
  sw.cavity_length = 100.0;
  sw.finesse_disc = 100.0;
  sw.mode_volume = oracle::pi * 1e-10 * 100.0 / 4.0;
  sw.linewidth = 1e6;
  const Beam beam(0.54303, 10e-6, 1064e-9, sw);
  const double w0 = 2.0 * oracle::pi * 145e3;

  auto h_of = [&](double thickness, double finesse, double pressure, double* mass) {
    StandingWave s = sw;
    s.finesse_disc = finesse;
    const Beam bb(beam.power(), beam.waist(), beam.wavelength(), s);
    const Particle d = Particle::disc(1e-6, thickness, 4200.0, 1.47);
    sensing::StrainInputs in;
    in.mass = d.mass();
    in.temperature = 300.0;
    in.gamma_gas = noise::gas_damping(d, GasEnvironment::air(pressure, 300.0));
    in.bandwidth = 1.0;
    in.gamma_sc = noise::disc_recoil_rate(d, bb, w0);
    in.cavity_length = s.cavity_length;
    in.linewidth = s.linewidth;
    if (mass) *mass = d.mass();
    return sensing::strain_limit(in, w0);
  };

  // Gas dominated: scan thickness at high pressure, slope in log(M t).
  std::vector<double> lx;
  std::vector<double> ly;
  for (int i = 0; i <= 10; ++i) {
    const double t = 50e-9 * std::pow(4.0, i / 10.0);
    double m = 0.0;
    const double h = h_of(t, 100.0, 1e2, &m);
    lx.push_back(std::log(m * t));
    ly.push_back(std::log(h));
  }
  const double s_gas = oracle::fit_line(lx, ly).slope;

  // Recoil dominated: scan thickness (mass) and finesse in deep vacuum.
  lx.clear();
  ly.clear();
  for (int i = 0; i <= 10; ++i) {
    const double t = 50e-9 * std::pow(4.0, i / 10.0);
    double m = 0.0;
    const double h = h_of(t, 100.0, 1e-14, &m);
    lx.push_back(std::log(m));
    ly.push_back(std::log(h));
  }
  const double s_mass = oracle::fit_line(lx, ly).slope;
  lx.clear();
  ly.clear();
  for (int i = 0; i <= 10; ++i) {
    const double fin = 10.0 * std::pow(100.0, i / 10.0);
    lx.push_back(std::log(fin));
    ly.push_back(std::log(h_of(100e-9, fin, 1e-14, nullptr)));
  }
  const double s_fin = oracle::fit_line(lx, ly).slope;
  const double h_half = sensing::cavity_response(0.5e6, 1e6);
  const bool ok = std::abs(s_gas / -0.5 - 1.0) < 0.02 && std::abs(s_mass / -1.0 - 1.0) < 0.02 &&
                  std::abs(s_fin / -0.5 - 1.0) < 0.02 && std::abs(h_half - std::sqrt(2.0)) < 1e-15;
  return {ok, "slopes: gas d ln h / d ln(M t) = " + fmt("%.4f", s_gas) + " (-0.5), recoil d ln h / d ln M = " +
                  fmt("%.4f", s_mass) + " (-1), d ln h / d ln F = " + fmt("%.4f", s_fin) +
                  " (-0.5); H(kappa/2) - sqrt2 = " + fmt("%.1e", h_half - std::sqrt(2.0))};
}

#if LEVISIM_WITH_APP
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}
#endif

Outcome c10_determinism() {
#if LEVISIM_WITH_APP
  namespace fs = std::filesystem;
  std::array<fs::path, 3> dirs;
  const std::array<unsigned, 3> threads{1, 4, 0};
  for (std::size_t i = 0; i < 3; ++i) {
    app::RunContext ctx;
    ctx.config = app::builtin_config("time_trace");
    ctx.config.simulation.n_runs = 3;
    ctx.config.simulation.duration = 0.02;
    ctx.out_dir = oracle::scratch_dir("acceptance_det_" + std::to_string(i));
    ctx.threads = threads[i];
    app::run_simulate(ctx);
    app::run_psd(ctx);
    dirs[i] = ctx.out_dir;
  }
  std::size_t compared = 0;
  bool ok = true;
  for (const auto& entry : fs::directory_iterator(dirs[0])) {
    const auto name = entry.path().filename();
    const std::string ref = slurp(entry.path());
    for (std::size_t i = 1; i < 3; ++i) ok = ok && !ref.empty() && ref == slurp(dirs[i] / name);
    ++compared;
  }
  ok = ok && compared >= 12;
  return {ok, std::to_string(compared) + " trajectory/spectrum files byte-identical across 3 runs "
                                          "(1, 4 and all threads)"};
#else
  // Without the command-line tools, compare two in-memory ensembles.
  const auto eom = reference_eom(100.0);
  dynamics::SimulationOptions o;
  o.duration = 0.01;
  o.seed = 10;
  o.initial = dynamics::InitialState::thermal;
  const auto a = dynamics::ensemble(eom, o, 3, 1);
  const auto b = dynamics::ensemble(eom, o, 3, 4);
  bool ok = true;
  for (std::size_t r = 0; r < 3; ++r) ok = ok && a[r].q == b[r].q && a[r].v == b[r].v;
  return {ok, "trajectories bit-identical across thread counts"};
#endif
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"reference-figure frequencies", c1_reference_frequencies},
      {"equipartition", c2_equipartition},
      {"PSD round trip", c3_psd_round_trip},
      {"ballistic MSD and velocity distribution", c4_ballistic},
      {"energy relaxation", c5_relaxation},
      {"recoil heating", c6_recoil},
      {"cold damping", c7_cold_damping},
      {"sensitivity identities", c8_sensitivity},
      {"strain scaling", c9_strain},
      {"determinism", c10_determinism},
  };
  std::vector<std::size_t> selected;
  if (argc > 1) {
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "usage: %s [1-%zu]\n", argv[0], criteria.size());
      return 2;
    }
    selected.push_back(static_cast<std::size_t>(n - 1));
  } else {
    for (std::size_t i = 0; i < criteria.size(); ++i) selected.push_back(i);
  }
  bool all = true;
  for (std::size_t i : selected) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].title,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
