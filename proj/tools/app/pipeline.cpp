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

#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <ostream>
#include <sstream>

#include "levisim/constants.hpp"
#include "levisim/detection.hpp"
#include "levisim/error.hpp"
#include "levisim/io.hpp"
#include "levisim/sensing.hpp"

namespace levisim::app {

namespace fs = std::filesystem;
using nlohmann::json;
using constants::k_B;
using constants::pi;

namespace {

json per_axis(const std::array<double, 3>& v) { return {{"x", v[0]}, {"y", v[1]}, {"z", v[2]}}; }

json per_axis(const optics::TrapFrequencies& f) { return {{"x", f.x}, {"y", f.y}, {"z", f.z}}; }

json provenance(const RunContext& ctx) {
  return {{"fingerprint", fingerprint(ctx.config)}, {"seed", ctx.config.simulation.seed}};
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void warn(const RunContext& ctx, const std::string& msg) {
  if (ctx.err) *ctx.err << "levisim: warning: " << msg << "\n";
}

dynamics::SimulationOptions simulation_options(const RunContext& ctx) {
  const SimulationConfig& s = ctx.config.simulation;
  if (!s.duration) throw ConfigError("missing required field simulation.duration");
  dynamics::SimulationOptions o;
  o.duration = *s.duration;
  o.dt = s.dt;
  o.seed = s.seed;
  o.initial = s.initial == "rest" ? dynamics::InitialState::given : dynamics::InitialState::thermal;
  o.x0 = {s.x0[0], s.x0[1], s.x0[2]};
  o.v0 = {s.v0[0], s.v0[1], s.v0[2]};
  o.record_stride = s.record_stride;
  o.fingerprint = fingerprint(ctx.config);
  return o;
}

fs::path trajectory_input(const RunContext& ctx) {
  return ctx.input ? *ctx.input : ctx.out_dir / "traj.csv";
}

dynamics::Trajectory load_trajectory(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read trajectory " + path.string());
  return io::read_trajectory_csv(in);
}

detection::WelchOptions welch_options(const ExperimentConfig& cfg) {
  detection::WelchOptions w;
  w.segment_length = cfg.psd.segment_length;
  w.overlap = cfg.psd.overlap;
  w.window = detection::window_from_name(cfg.psd.window);
  return w;
}

detection::FitOptions fit_options(const ExperimentConfig& cfg, double omega_q) {
  detection::FitOptions f;
  f.omega_min = cfg.psd.fit_omega_min > 0.0 ? cfg.psd.fit_omega_min : omega_q / 4.0;
  f.omega_max = cfg.psd.fit_omega_max > 0.0 ? cfg.psd.fit_omega_max : omega_q * 4.0;
  return f;
}

json fit_json(const detection::LorentzianFit& fit) {
  return {{"amplitude", fit.amplitude},
          {"amplitude_sigma", fit.sigma(0)},
          {"omega_m", fit.omega_m},
          {"omega_m_sigma", fit.sigma(1)},
          {"gamma", fit.gamma},
          {"gamma_sigma", fit.sigma(2)},
          {"floor", fit.floor},
          {"floor_sigma", fit.sigma(3)},
          {"peak_height", fit.peak_height()},
          {"area", fit.area()},
          {"iterations", fit.iterations},
          {"residual_rms_log", fit.residual_rms}};
}

json spectrum_meta(const detection::Spectrum& sp) {
  return {{"convention", sp.convention},
          {"units", sp.units},
          {"window", sp.window},
          {"segment_length", sp.segment_length},
          {"segments", sp.segments},
          {"overlap", sp.overlap},
          {"sample_rate_hz", sp.sample_rate},
          {"equivalent_dof", sp.dof},
          {"bins", sp.size()}};
}

void write_spectrum(const fs::path& stem, const detection::Spectrum& sp, json meta) {
  std::ostringstream csv;
  io::write_spectrum_csv(csv, sp);
  write_text(fs::path(stem).concat(".csv"), csv.str());
  meta["spectrum"] = spectrum_meta(sp);
  write_json(fs::path(stem).concat(".json"), meta);
}

void write_trajectory(const fs::path& stem, const dynamics::Trajectory& traj, const json& config) {
  std::ostringstream csv;
  io::write_trajectory_csv(csv, traj);
  write_text(fs::path(stem).concat(".csv"), csv.str());
  write_json(fs::path(stem).concat(".json"),
             {{"fingerprint", traj.fingerprint},
              {"seed", traj.seed},
              {"run", traj.run},
              {"sample_period_s", traj.dt},
              {"samples", traj.size()},
              {"columns", {"t", "x", "vx", "y", "vy", "z", "vz"}},
              {"units", {"s", "m", "m/s", "m", "m/s", "m", "m/s"}},
              {"config", config}});
}

std::string run_stem(std::size_t r) {
  if (r == 0) return "traj";
  char buf[32];
  std::snprintf(buf, sizeof buf, "traj_r%04zu", r);
  return buf;
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw ConfigError("invalid scan range");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return out;
}

json budget_document(const RunContext& ctx);

}  // namespace

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("failed writing " + path.string());
}

Model build_model(const ExperimentConfig& cfg) {
  Particle p = make_particle(cfg);
  Beam b = make_beam(cfg);
  GasEnvironment g = make_gas(cfg);
  optics::check_rayleigh(p, b);
  const optics::TrapFrequencies f = optics::trap_frequencies(p, b);

  noise::BudgetInputs in;
  in.gamma_fb = cfg.feedback.damping_rate();
  in.gamma_photon = cfg.noise.gamma_photon;
  in.Gamma_fb = cfg.noise.Gamma_fb;
  in.Gamma_other = cfg.noise.Gamma_other;
  in.damping = damping_model(cfg);
  const noise::NoiseBudget nb = noise::make_noise_budget(p, b, g, f, in);

  dynamics::EquationOfMotion eom;
  eom.omega = {f.x, f.y, f.z};
  eom.gamma = nb.gamma_gas;
  eom.mass = p.mass();
  eom.temperature = g.temperature();
  eom.thermal_noise = cfg.simulation.thermal_noise;
  if (cfg.simulation.recoil) eom.S_qba = nb.S_FF_qba;
  if (cfg.simulation.duffing) eom.duffing = optics::duffing_coefficients(p, b);
  if (cfg.feedback.kind != feedback::Kind::none) eom.feedback = cfg.feedback;
  return Model{p, b, g, f, nb, eom};
}

std::vector<Stage> parse_stages(std::string_view list) {
  static const std::array<Stage, 6> order{Stage::trap,      Stage::simulate, Stage::psd,
                                          Stage::calibrate, Stage::budget,   Stage::sense};
  std::array<bool, 6> wanted{};
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = std::min(list.find(',', pos), list.size());
    std::string_view name = list.substr(pos, comma - pos);
    while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
    bool found = false;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (stage_name(order[i]) == name) {
        wanted[i] = true;
        found = true;
      }
    }
    if (!found) throw ConfigError("unknown stage '" + std::string(name) + "'");
    pos = comma + 1;
  }
  std::vector<Stage> out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (wanted[i]) out.push_back(order[i]);
  }
  return out;
}

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::trap: return "trap";
    case Stage::simulate: return "simulate";
    case Stage::psd: return "psd";
    case Stage::calibrate: return "calibrate";
    case Stage::budget: return "budget";
    case Stage::sense: return "sense";
  }
  return "?";
}

json run_trap(const RunContext& ctx) {
  const Model m = build_model(ctx.config);
  const double xi = optics::size_parameter(m.particle, m.beam);
  const auto validity = optics::check_rayleigh(m.particle, m.beam);
  if (validity == optics::RayleighValidity::warning) {
    warn(ctx, "size parameter " + std::to_string(xi) + " > 0.5, Rayleigh approximation marginal");
  }
  if (polarizability(m.particle).equivalent_volume_approximation) {
    warn(ctx, "disc transverse frequencies and scattering use the equal-volume sphere");
  }

  json j = provenance(ctx);
  j["omega_rad_s"] = per_axis(m.frequencies);
  j["frequency_hz"] = per_axis(std::array<double, 3>{units::rad_s_to_hz(m.frequencies.x),
                                units::rad_s_to_hz(m.frequencies.y),
                                units::rad_s_to_hz(m.frequencies.z)});
  j["gamma_gas"] = m.budget.gamma_gas;
  j["mass"] = m.particle.mass();
  j["size_parameter"] = xi;
  j["rayleigh"] = validity == optics::RayleighValidity::ok ? "ok" : "warning";
  j["scattering_cross_section"] = optics::scattering_cross_section(m.particle, m.beam);
  j["scattered_power"] = optics::scattered_power(m.particle, m.beam);
  j["peak_intensity"] = optics::IntensityField(m.beam)(Vec3{});
  if (m.particle.is_disc()) {
    j["axial_frequency_from_potential"] =
        optics::axial_frequency_from_potential(m.particle, m.beam);
  }
  if (!m.beam.is_standing_wave()) {
    const auto d = optics::duffing_coefficients(m.particle, m.beam);
    j["duffing"] = {{"stiffness", per_axis(d.stiffness)},
                    {"self", per_axis(d.self)},
                    {"cross", {{"x", per_axis(d.cross[0])},
                               {"y", per_axis(d.cross[1])},
                               {"z", per_axis(d.cross[2])}}}};
  }
  j["noise_budget"] = budget_document(ctx)["rates"];
  write_json(ctx.out_dir / "trap.json", j);
  if (ctx.out) *ctx.out << j.dump(2) << "\n";
  return j;
}

json run_simulate(const RunContext& ctx) {
  const Model m = build_model(ctx.config);
  const dynamics::SimulationOptions opts = simulation_options(ctx);
  const json config = to_json(ctx.config);
  const std::size_t runs = ctx.config.simulation.n_runs;

  // Each run is written as soon as it is produced to bound memory.
  const auto samples = dynamics::ensemble_map(
      m.eom, opts, runs,
      [&](const dynamics::Trajectory& t) {
        write_trajectory(ctx.out_dir / run_stem(t.run - opts.run), t, config);
        return t.size();
      },
      ctx.threads);

  json j = provenance(ctx);
  j["runs"] = runs;
  j["samples_per_run"] = samples.front();
  j["dt"] = opts.dt > 0.0 ? opts.dt : dynamics::default_time_step(m.eom);
  j["sample_period_s"] = j["dt"].get<double>() * static_cast<double>(opts.record_stride);
  j["trajectory"] = (ctx.out_dir / "traj.csv").string();
  if (ctx.out) *ctx.out << j.dump(2) << "\n";
  return j;
}

json run_psd(const RunContext& ctx) {
  const Model m = build_model(ctx.config);
  const fs::path input = trajectory_input(ctx);
  const dynamics::Trajectory traj = load_trajectory(input);
  const double fs_hz = 1.0 / traj.dt;

  json summary = provenance(ctx);
  summary["source"] = input.filename().string();
  for (Axis a : kAxes) {
    detection::Spectrum sp = detection::welch_psd(traj.position(a), fs_hz, welch_options(ctx.config));
    json meta = provenance(ctx);
    meta["axis"] = std::string(axis_name(a));
    meta["source"] = input.filename().string();
    meta["omega_q_model"] = m.frequencies[a];
    meta["expected_area"] = k_B * m.gas.temperature() / (m.particle.mass() * m.frequencies[a] * m.frequencies[a]);
    try {
      const auto fit = detection::lorentzian_fit(sp, fit_options(ctx.config, m.frequencies[a]));
      meta["fit"] = fit_json(fit);
    } catch (const Error& e) {
      meta["fit_error"] = e.what();
      warn(ctx, "axis " + std::string(axis_name(a)) + ": " + e.what());
    }
    write_spectrum(ctx.out_dir / ("spectrum_" + std::string(axis_name(a))), sp, meta);
    summary[std::string(axis_name(a))] = meta;
  }
  if (ctx.out) *ctx.out << summary.dump(2) << "\n";
  return summary;
}

json run_calibrate(const RunContext& ctx) {
  const Model m = build_model(ctx.config);
  const fs::path input = trajectory_input(ctx);
  dynamics::Trajectory traj = load_trajectory(input);
  const Axis axis = parse_axis(ctx.config.readout.axis);
  const auto volts = detection::synthesize_readout(traj, axis, ctx.config.readout.model,
                                                   ctx.config.simulation.seed);
  detection::Spectrum sp = detection::welch_psd(volts, 1.0 / traj.dt, welch_options(ctx.config));
  sp.units = "V^2/Hz";

  detection::CalibrationOptions co;
  co.fit = fit_options(ctx.config, m.frequencies[axis]);
  co.reference_conversion = ctx.config.calibration.reference_conversion;
  co.bias_tolerance = ctx.config.calibration.bias_tolerance;
  const auto cal = detection::calibrate_volts_to_meters(sp, m.particle.mass(), m.gas.temperature(), co);

  json j = provenance(ctx);
  j["axis"] = std::string(axis_name(axis));
  j["source"] = input.filename().string();
  j["conversion_v_per_m"] = cal.conversion;
  j["conversion_uncertainty"] = cal.uncertainty;
  j["configured_conversion"] = ctx.config.readout.model.conversion;
  j["assumes_thermal_equilibrium"] = cal.assumes_thermal_equilibrium;
  j["hot_particle_suspected"] = cal.hot_particle_suspected;
  if (cal.bias_ratio) j["bias_ratio"] = *cal.bias_ratio;
  j["fit"] = fit_json(cal.fit);
  write_spectrum(ctx.out_dir / "spectrum_voltage", sp, provenance(ctx));
  write_json(ctx.out_dir / "calibration.json", j);
  if (ctx.out) *ctx.out << j.dump(2) << "\n";
  return j;
}

namespace {

json budget_document(const RunContext& ctx) {
  const Model m = build_model(ctx.config);
  const Particle& p = m.particle;
  const GasEnvironment& g = m.gas;
  const noise::NoiseBudget& nb = m.budget;
  const double mass = p.mass();

  auto rate = [](double value, const char* unit, const char* formula, json inputs) {
    return json{{"value", value}, {"unit", unit}, {"formula", formula}, {"inputs", std::move(inputs)}};
  };
  const json gas_inputs{{"pressure", g.pressure()},
                        {"temperature", g.temperature()},
                        {"viscosity", g.viscosity()},
                        {"mean_free_path", mean_free_path(g)},
                        {"knudsen_number", knudsen_number(p, g)},
                        {"mean_speed", g.mean_speed()},
                        {"radius", p.radius()},
                        {"density", p.density()},
                        {"mass", mass}};
  const bool knudsen = p.is_sphere() && damping_model(ctx.config) != noise::DampingModel::free_molecular;
  const char* gas_formula =
      knudsen ? "knudsen: (6 pi eta R / m) 0.619 / (0.619 + Kn) (1 + 0.31 Kn / (0.785 + 1.152 Kn + Kn^2))"
      : p.is_disc() ? "free_molecular_disc: 32 P / (pi vbar rho t)"
                    : "free_molecular_sphere: 16 P / (pi vbar rho R)";

  json rates;
  rates["gamma_gas"] = rate(nb.gamma_gas, "1/s", gas_formula, gas_inputs);
  rates["gamma_fb"] = rate(nb.gamma_fb, "1/s", "cold-damping gain C_l", {{"kind", ctx.config.feedback.kind == feedback::Kind::cold_damping ? "cold_damping" : "other"}});
  rates["gamma_photon"] = rate(nb.gamma_photon, "1/s", "user input", json::object());
  rates["Gamma_fb"] = rate(nb.Gamma_fb, "phonons/s", "user input", json::object());
  rates["Gamma_other"] = rate(nb.Gamma_other, "phonons/s", "user input", json::object());
  rates["S_FF_thermal"] = rate(nb.S_FF_thermal, "N^2/Hz", "2 M k_B T gamma_gas",
                               {{"mass", mass}, {"temperature", g.temperature()}, {"gamma_gas", nb.gamma_gas}});
  const double pscat = optics::scattered_power(p, m.beam);
  const json recoil_inputs{{"scattered_power", pscat},
                           {"optical_frequency", m.beam.optical_frequency()},
                           {"mass", mass}};
  for (Axis a : kAxes) {
    const std::size_t i = index(a);
    const std::string s(axis_name(a));
    const double w = m.frequencies[a];
    rates["Gamma_th_" + s] = rate(nb.Gamma_th[i], "phonons/s", "gamma_gas k_B T / (hbar Omega)",
                                  {{"gamma_gas", nb.gamma_gas}, {"temperature", g.temperature()}, {"omega", w}});
    json ri = recoil_inputs;
    ri["omega"] = w;
    rates["Gamma_sc_" + s] =
        rate(nb.Gamma_sc[i], "phonons/s",
             a == Axis::x ? "(1/10) (P_scat / (M c^2)) (omega0 / Omega)"
                          : "(1/5) (P_scat / (M c^2)) (omega0 / Omega)",
             ri);
    rates["S_FF_qba_" + s] = rate(nb.S_FF_qba[i], "N^2/Hz",
                                  a == Axis::x ? "(1/5) hbar omega0 P_scat / c^2"
                                               : "(2/5) hbar omega0 P_scat / c^2",
                                  recoil_inputs);
    double n_inf = 0.0;
    try {
      n_inf = noise::steady_state_phonons(nb, a);
      rates["n_inf_" + s] = rate(n_inf, "phonons",
                                 "(Gamma_th + Gamma_fb + Gamma_sc + Gamma_other) / (gamma_gas + gamma_fb + gamma_photon)",
                                 {{"axis", s}});
    } catch (const ValidityError&) {
      rates["n_inf_" + s] = rate(std::numeric_limits<double>::infinity(), "phonons",
                                 "no damping channel", {{"axis", s}});
    }
    rates["classicality_threshold_" + s] =
        rate(noise::classicality_threshold(w), "K", "hbar Omega / k_B", {{"omega", w}});
  }
  rates["Gamma_sc_secondary"] =
      rate(noise::recoil_heating_rate_secondary(p, m.beam), "1/s",
           "(2/5) (pi^2 omega0 V / lambda^3) (eps - 1) / (eps + 2)",
           {{"volume", p.volume()}, {"wavelength", m.beam.wavelength()}, {"permittivity", p.permittivity()}});
  if (p.surface_temperature()) {
    rates["Gamma_em"] = rate(
        noise::hot_sphere_damping_correction(*p.surface_temperature(), g.temperature(), nb.gamma_gas),
        "1/s", "2 pi (1/16) sqrt(T_em / T_gas) gamma_gas",
        {{"T_em", *p.surface_temperature()}, {"T_gas", g.temperature()}, {"gamma_gas", nb.gamma_gas}});
  }
  if (p.is_disc() && m.beam.is_standing_wave() && m.beam.standing_wave().cavity_length > 0.0 &&
      m.beam.standing_wave().mode_volume > 0.0 && m.beam.standing_wave().finesse_disc > 0.0) {
    const auto& sw = m.beam.standing_wave();
    rates["gamma_sc_disc"] = rate(noise::disc_recoil_rate(p, m.beam, m.frequencies.z), "1/s",
                                  "(V_c lambda omega0 / 4L) / (F_disc (eps - 1) V_disc)",
                                  {{"mode_volume", sw.mode_volume},
                                   {"cavity_length", sw.cavity_length},
                                   {"finesse_disc", sw.finesse_disc},
                                   {"omega0", m.frequencies.z}});
  }

  json j = provenance(ctx);
  j["free_molecular_regime"] = noise::free_molecular_regime(p, g);
  j["rates"] = rates;
  return j;
}

}  // namespace

json run_budget(const RunContext& ctx) {
  const json j = budget_document(ctx);
  write_json(ctx.out_dir / "budget.json", j);
  if (ctx.out) *ctx.out << j.dump(2) << "\n";
  return j;
}

json run_sense(const RunContext& ctx) {
  const Model m = build_model(ctx.config);
  const SensingConfig& sc = ctx.config.sensing;
  const double t_cm = sc.temperature.value_or(m.gas.temperature());
  const sensing::SensingQuery query =
      sc.measurement_time ? sensing::SensingQuery::from_measurement_time(*sc.measurement_time, t_cm, sc.z_rms, sc.q_eff)
                          : sensing::SensingQuery::from_bandwidth(sc.bandwidth.value_or(1.0), t_cm, sc.z_rms, sc.q_eff);
  const Axis axis = parse_axis(ctx.config.readout.axis);
  const double mass = m.particle.mass();
  const double w0 = m.frequencies[axis];
  const double gamma = m.budget.gamma_gas;
  const double b = query.bandwidth();
  const double gsc = m.budget.Gamma_sc[index(axis)];

  json j = provenance(ctx);
  j["axis"] = std::string(axis_name(axis));
  j["bandwidth_hz"] = b;
  j["measurement_time_s"] = query.measurement_time();
  j["temperature_cm"] = t_cm;
  j["omega0"] = w0;
  j["gamma_gas"] = gamma;
  const double f_lim = sensing::force_min_with_recoil(mass, t_cm, gamma, b, gsc, w0);
  j["force_min_with_recoil_n"] = f_lim;
  if (gamma > 0.0) {
    j["force_min_thermal_n"] = sensing::force_min_thermal(mass * w0 * w0, t_cm, b, w0, w0 / gamma);
    j["torque_min_n_m"] = sensing::torque_min(t_cm, m.particle.moment_of_inertia(), gamma, query.measurement_time());
  }
  const auto acc = sensing::acceleration_min(f_lim, mass);
  j["acceleration_min"] = {{"m_s2", acc.si}, {"g", acc.g_units}};
  if (sc.z_rms > 0.0 && sc.q_eff > 0.0) {
    j["min_frequency_shift"] =
        sensing::min_frequency_shift(t_cm, b, mass * w0 * w0, w0, sc.q_eff, sc.z_rms);
  }

  std::ostringstream pcsv;
  pcsv << "pressure_pa,gamma_gas,force_min_thermal,force_min_with_recoil,acceleration_min_g\n";
  for (double pr : log_space(sc.pressure_min, sc.pressure_max, sc.points)) {
    const GasEnvironment g = m.gas.with_pressure(pr);
    const double gm = noise::gas_damping(m.particle, g, damping_model(ctx.config));
    const double fl = sensing::force_min_with_recoil(mass, t_cm, gm, b, gsc, w0);
    const double ft = sensing::force_min_thermal(mass * w0 * w0, t_cm, b, w0, w0 / gm);
    pcsv << io::format_double(pr) << ',' << io::format_double(gm) << ',' << io::format_double(ft)
         << ',' << io::format_double(fl) << ',' << io::format_double(sensing::acceleration_min(fl, mass).g_units)
         << '\n';
  }
  write_text(ctx.out_dir / "sense_pressure.csv", pcsv.str());

  if (m.beam.is_standing_wave() && m.beam.standing_wave().cavity_length > 0.0 && m.particle.is_disc()) {
    const auto& sw = m.beam.standing_wave();
    sensing::StrainInputs in{mass, t_cm, gamma, b, 0.0, sw.cavity_length, sw.linewidth};
    std::ostringstream scsv;
    scsv << "omega_rad_s,frequency_hz,strain\n";
    for (double w : log_space(2.0 * pi * 1e3, 2.0 * pi * 1e6, sc.points)) {
      in.gamma_sc = noise::disc_recoil_rate(m.particle, m.beam, w);
      scsv << io::format_double(w) << ',' << io::format_double(units::rad_s_to_hz(w)) << ','
           << io::format_double(sensing::strain_limit(in, w)) << '\n';
    }
    write_text(ctx.out_dir / "sense_strain.csv", scsv.str());
    in.gamma_sc = noise::disc_recoil_rate(m.particle, m.beam, w0);
    j["strain_limit"] = sensing::strain_limit(in, w0);
    j["gamma_sc_disc"] = in.gamma_sc;
  }
  if (sc.gw_frequency) {
    const auto r = sensing::resonance_response_to_strain(units::hz_to_rad_s(*sc.gw_frequency), w0, 1e-3);
    j["resonance"] = {{"resonant", r.resonant}, {"detuning_rad_s", r.detuning}};
  }
  write_json(ctx.out_dir / "sense.json", j);
  if (ctx.out) *ctx.out << j.dump(2) << "\n";
  return j;
}

json run_stage(Stage s, const RunContext& ctx) {
  switch (s) {
    case Stage::trap: return run_trap(ctx);
    case Stage::simulate: return run_simulate(ctx);
    case Stage::psd: return run_psd(ctx);
    case Stage::calibrate: return run_calibrate(ctx);
    case Stage::budget: return run_budget(ctx);
    case Stage::sense: return run_sense(ctx);
  }
  return {};
}

json reproduce(std::string_view id, RunContext ctx) {
  ctx.config = builtin_config(id);
  ctx.out_dir /= std::string(id);
  ctx.config.simulation.duration = 0.2;
  ctx.config.simulation.n_runs = 8;
  ctx.config.simulation.record_stride = 10;
  const Model m = build_model(ctx.config);
  const dynamics::SimulationOptions opts = simulation_options(ctx);
  const json config = to_json(ctx.config);
  const double mass = m.particle.mass();
  const double temp = m.gas.temperature();
  const double sx = std::sqrt(k_B * temp / (mass * m.frequencies.x * m.frequencies.x));
  const double sv = std::sqrt(k_B * temp / mass);

  constexpr std::size_t kBins = 61;
  constexpr double kRange = 5.0;
  struct Stats {
    double x2 = 0.0;
    double v2 = 0.0;
    std::size_t n = 0;
    std::vector<double> hx = std::vector<double>(kBins, 0.0);
    std::vector<double> hv = std::vector<double>(kBins, 0.0);
  };
  auto bin = [](double u) -> std::ptrdiff_t {
    const double f = (u + kRange) / (2.0 * kRange) * static_cast<double>(kBins);
    return f < 0.0 || f >= static_cast<double>(kBins) ? -1 : static_cast<std::ptrdiff_t>(f);
  };
  const auto stats = dynamics::ensemble_map(
      m.eom, opts, ctx.config.simulation.n_runs,
      [&](const dynamics::Trajectory& t) {
        if (t.run == opts.run) write_trajectory(ctx.out_dir / "traj", t, config);
        Stats s;
        for (std::size_t i = 0; i < t.size(); ++i) {
          const double x = t.q[0][i];
          const double v = t.v[0][i];
          s.x2 += x * x;
          s.v2 += v * v;
          if (auto k = bin(x / sx); k >= 0) s.hx[static_cast<std::size_t>(k)] += 1.0;
          if (auto k = bin(v / sv); k >= 0) s.hv[static_cast<std::size_t>(k)] += 1.0;
        }
        s.n = t.size();
        return s;
      },
      ctx.threads);
  Stats total;
  for (const Stats& s : stats) {
    total.x2 += s.x2;
    total.v2 += s.v2;
    total.n += s.n;
    for (std::size_t k = 0; k < kBins; ++k) {
      total.hx[k] += s.hx[k];
      total.hv[k] += s.hv[k];
    }
  }
  const double var_x = total.x2 / static_cast<double>(total.n);
  const double var_v = total.v2 / static_cast<double>(total.n);

  auto histogram_csv = [&](const std::vector<double>& h, double sigma) {
    std::ostringstream csv;
    csv << "bin_center,count,density,gaussian_density\n";
    const double width = 2.0 * kRange * sigma / static_cast<double>(kBins);
    for (std::size_t k = 0; k < kBins; ++k) {
      const double c = (-kRange + (static_cast<double>(k) + 0.5) * 2.0 * kRange / kBins) * sigma;
      const double density = h[k] / (static_cast<double>(total.n) * width);
      const double gauss = std::exp(-0.5 * c * c / (sigma * sigma)) / (std::sqrt(2.0 * pi) * sigma);
      csv << io::format_double(c) << ',' << io::format_double(h[k]) << ','
          << io::format_double(density) << ',' << io::format_double(gauss) << '\n';
    }
    return csv.str();
  };
  write_text(ctx.out_dir / "histogram_x.csv", histogram_csv(total.hx, sx));
  write_text(ctx.out_dir / "histogram_vx.csv", histogram_csv(total.hv, sv));

  RunContext psd_ctx = ctx;
  psd_ctx.out = nullptr;
  psd_ctx.input = ctx.out_dir / "traj.csv";
  const json psd = run_psd(psd_ctx);

  const double ratio = m.frequencies.y / m.frequencies.z;
  const double reference_ratio = 43.025 / 7.505;
  json j = provenance(ctx);
  j["figure"] = std::string(id);
  j["frequency_hz"] = per_axis(std::array<double, 3>{units::rad_s_to_hz(m.frequencies.x), units::rad_s_to_hz(m.frequencies.y),
                                units::rad_s_to_hz(m.frequencies.z)});
  j["reference_frequency_hz"] = {{"x", 47.328e3}, {"y", 43.025e3}, {"z", 7.505e3}};
  j["ratio_y_over_z"] = ratio;
  j["reference_ratio_y_over_z"] = reference_ratio;
  j["ratio_relative_error"] = std::abs(ratio / reference_ratio - 1.0);
  j["ratio_within_0p5_percent"] = std::abs(ratio / reference_ratio - 1.0) < 5e-3;
  j["position_variance_x"] = var_x;
  j["equipartition_variance_x"] = sx * sx;
  j["position_variance_relative_error"] = std::abs(var_x / (sx * sx) - 1.0);
  j["velocity_rms_x"] = std::sqrt(var_v);
  j["maxwell_boltzmann_v_rms"] = sv;
  j["runs"] = ctx.config.simulation.n_runs;
  j["psd_fits"] = {{"x", psd["x"].value("fit", json::object())},
                   {"y", psd["y"].value("fit", json::object())},
                   {"z", psd["z"].value("fit", json::object())}};
  write_json(ctx.out_dir / "reproduce.json", j);
  if (ctx.out) *ctx.out << j.dump(2) << "\n";
  return j;
}

}  // namespace levisim::app
