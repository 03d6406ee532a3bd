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

#include "config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "levisim/error.hpp"

namespace levisim::app {

namespace {

std::string where(const toml::node& n) {
  const auto& src = n.source();
  if (src.begin.line == 0) return "";
  return " (line " + std::to_string(src.begin.line) + ")";
}

/// Strict accessor for one TOML table: every key must be consumed.
class Section {
 public:
  Section(const toml::table* table, std::string path) : table_(table), path_(std::move(path)) {}

  bool present() const { return table_ != nullptr; }

  std::string field(std::string_view key) const { return path_ + "." + std::string(key); }

  const toml::node* node(std::string_view key) {
    used_.insert(std::string(key));
    if (!table_) return nullptr;
    return table_->get(key);
  }

  void number(std::string_view key, double& out, bool required = false) {
    const toml::node* n = node(key);
    if (!n) {
      if (required) throw ConfigError("missing required field " + field(key));
      return;
    }
    if (auto v = n->value<double>(); v && (n->is_floating_point() || n->is_integer())) {
      out = *v;
      return;
    }
    throw ConfigError(field(key) + ": expected a number" + where(*n));
  }

  void number(std::string_view key, std::optional<double>& out) {
    double v = 0.0;
    if (node(key)) {
      number(key, v);
      out = v;
    }
  }

  void count(std::string_view key, std::size_t& out) {
    const toml::node* n = node(key);
    if (!n) return;
    const auto v = n->value<std::int64_t>();
    if (!n->is_integer() || !v || *v < 0) {
      throw ConfigError(field(key) + ": expected a non-negative integer" + where(*n));
    }
    out = static_cast<std::size_t>(*v);
  }

  void seed(std::string_view key, std::uint64_t& out) {
    std::size_t v = 0;
    if (node(key)) {
      count(key, v);
      out = v;
    }
  }

  void flag(std::string_view key, bool& out) {
    const toml::node* n = node(key);
    if (!n) return;
    if (!n->is_boolean()) throw ConfigError(field(key) + ": expected true or false" + where(*n));
    out = *n->value<bool>();
  }

  void text(std::string_view key, std::string& out, std::initializer_list<std::string_view> allowed) {
    const toml::node* n = node(key);
    if (!n) return;
    if (!n->is_string()) throw ConfigError(field(key) + ": expected a string" + where(*n));
    std::string v = *n->value<std::string>();
    bool ok = allowed.size() == 0;
    std::string options;
    for (std::string_view a : allowed) {
      ok = ok || v == a;
      options += (options.empty() ? "" : ", ") + std::string(a);
    }
    if (!ok) {
      throw ConfigError(field(key) + ": unknown value '" + v + "' (expected one of " + options + ")" +
                        where(*n));
    }
    out = std::move(v);
  }

  void vector3(std::string_view key, std::array<double, 3>& out) {
    const toml::node* n = node(key);
    if (!n) return;
    const toml::array* arr = n->as_array();
    if (!arr || arr->size() != 3) {
      throw ConfigError(field(key) + ": expected an array of three numbers" + where(*n));
    }
    for (std::size_t i = 0; i < 3; ++i) {
      const auto v = (*arr)[i].value<double>();
      if (!v) throw ConfigError(field(key) + ": expected an array of three numbers" + where(*n));
      out[i] = *v;
    }
  }

  void axes(std::string_view key, std::array<bool, 3>& out) {
    const toml::node* n = node(key);
    if (!n) return;
    const toml::array* arr = n->as_array();
    if (!arr) throw ConfigError(field(key) + ": expected an array of axis names" + where(*n));
    out = {false, false, false};
    for (const auto& el : *arr) {
      const auto name = el.value<std::string>();
      if (!name || (*name != "x" && *name != "y" && *name != "z")) {
        throw ConfigError(field(key) + ": axis names must be \"x\", \"y\" or \"z\"" + where(el));
      }
      out[index(parse_axis(*name))] = true;
    }
  }

  /// Rejects keys that were never requested.
  void finish() const {
    if (!table_) return;
    for (const auto& [k, v] : *table_) {
      if (!used_.count(std::string(k.str()))) {
        throw ConfigError("unknown key " + field(k.str()) + where(v));
      }
    }
  }

 private:
  const toml::table* table_;
  std::string path_;
  std::set<std::string> used_;
};

const toml::table* subtable(const toml::table& root, std::string_view name) {
  const toml::node* n = root.get(name);
  if (!n) return nullptr;
  if (!n->is_table()) throw ConfigError("[" + std::string(name) + "] must be a table" + where(*n));
  return n->as_table();
}

void require_table(const toml::table* t, std::string_view name) {
  if (!t) throw ConfigError("missing required section [" + std::string(name) + "]");
}

}  // namespace

Axis parse_axis(std::string_view name) {
  if (name == "x") return Axis::x;
  if (name == "y") return Axis::y;
  if (name == "z") return Axis::z;
  throw ConfigError("unknown axis '" + std::string(name) + "'");
}

ExperimentConfig parse_config(std::string_view toml_text, std::string_view source) {
  toml::table root;
  try {
    root = toml::parse(toml_text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << source << ": line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }

  static const std::set<std::string> sections{"particle", "beam",     "gas",         "noise",
                                              "feedback", "readout",  "simulation",  "psd",
                                              "calibration", "sensing"};
  for (const auto& [k, v] : root) {
    if (!sections.count(std::string(k.str()))) {
      throw ConfigError("unknown section [" + std::string(k.str()) + "]" + where(v));
    }
  }

  ExperimentConfig cfg;

  const toml::table* pt = subtable(root, "particle");
  require_table(pt, "particle");
  Section particle(pt, "particle");
  particle.text("shape", cfg.particle.shape, {"sphere", "disc"});
  particle.number("radius", cfg.particle.radius, true);
  particle.number("density", cfg.particle.density, true);
  particle.number("refractive_index", cfg.particle.refractive_index, true);
  particle.number("thickness", cfg.particle.thickness, cfg.particle.shape == "disc");
  particle.number("surface_temperature", cfg.particle.surface_temperature);
  particle.finish();

  const toml::table* bt = subtable(root, "beam");
  require_table(bt, "beam");
  Section beam(bt, "beam");
  beam.number("power", cfg.beam.power, true);
  beam.number("waist", cfg.beam.waist, true);
  beam.number("wavelength", cfg.beam.wavelength, true);
  beam.text("geometry", cfg.beam.geometry, {"tweezer", "standing_wave"});
  beam.vector3("polarization", cfg.beam.polarization);
  beam.number("xy_asymmetry", cfg.beam.xy_asymmetry);
  beam.number("contrast", cfg.beam.contrast);
  beam.number("cavity_length", cfg.beam.cavity_length);
  beam.number("finesse_disc", cfg.beam.finesse_disc);
  beam.number("mode_volume", cfg.beam.mode_volume);
  beam.number("linewidth", cfg.beam.linewidth);
  beam.finish();

  const toml::table* gt = subtable(root, "gas");
  require_table(gt, "gas");
  Section gas(gt, "gas");
  gas.number("pressure", cfg.gas.pressure, true);
  gas.number("temperature", cfg.gas.temperature, true);
  gas.number("viscosity", cfg.gas.viscosity);
  gas.number("molecular_mass", cfg.gas.molecular_mass);
  gas.number("molecular_diameter", cfg.gas.molecular_diameter);
  gas.text("damping", cfg.gas.damping, {"auto", "knudsen", "free_molecular"});
  gas.finish();

  Section noise(subtable(root, "noise"), "noise");
  noise.number("gamma_photon", cfg.noise.gamma_photon);
  noise.number("Gamma_fb", cfg.noise.Gamma_fb);
  noise.number("Gamma_other", cfg.noise.Gamma_other);
  noise.finish();

  Section fb(subtable(root, "feedback"), "feedback");
  std::string kind = "none";
  fb.text("kind", kind, {"none", "cold_damping", "parametric"});
  cfg.feedback.kind = kind == "cold_damping"  ? feedback::Kind::cold_damping
                      : kind == "parametric" ? feedback::Kind::parametric
                                             : feedback::Kind::none;
  fb.number("gain", cfg.feedback.gain);
  fb.number("measurement_delay", cfg.feedback.measurement_delay);
  fb.number("measurement_noise_psd", cfg.feedback.measurement_noise_psd);
  fb.number("force_saturation", cfg.feedback.force_saturation);
  std::string velocity = "two_point";
  fb.text("velocity_estimator", velocity, {"two_point", "ideal"});
  cfg.feedback.velocity = velocity == "ideal" ? feedback::VelocityEstimator::ideal
                                              : feedback::VelocityEstimator::two_point;
  fb.axes("axes", cfg.feedback.axes);
  fb.finish();

  Section ro(subtable(root, "readout"), "readout");
  ro.text("axis", cfg.readout.axis, {"x", "y", "z"});
  ro.number("conversion", cfg.readout.model.conversion);
  ro.number("shot_noise_floor", cfg.readout.model.shot_noise_floor);
  ro.number("reference_phase", cfg.readout.model.reference_phase);
  ro.number("local_oscillator_power", cfg.readout.model.local_oscillator_power);
  ro.number("signal_power", cfg.readout.model.signal_power);
  ro.number("heterodyne_offset", cfg.readout.model.heterodyne_offset);
  ro.flag("balanced", cfg.readout.model.balanced);
  ro.finish();

  Section sim(subtable(root, "simulation"), "simulation");
  sim.number("duration", cfg.simulation.duration);
  sim.number("dt", cfg.simulation.dt);
  sim.seed("seed", cfg.simulation.seed);
  sim.count("n_runs", cfg.simulation.n_runs);
  sim.count("record_stride", cfg.simulation.record_stride);
  sim.text("initial", cfg.simulation.initial, {"thermal", "rest"});
  sim.vector3("x0", cfg.simulation.x0);
  sim.vector3("v0", cfg.simulation.v0);
  sim.flag("thermal_noise", cfg.simulation.thermal_noise);
  sim.flag("recoil", cfg.simulation.recoil);
  sim.flag("duffing", cfg.simulation.duffing);
  sim.finish();
  if (cfg.simulation.n_runs == 0) throw ConfigError("simulation.n_runs must be >= 1");
  if (cfg.simulation.record_stride == 0) throw ConfigError("simulation.record_stride must be >= 1");

  Section psd(subtable(root, "psd"), "psd");
  psd.count("segment_length", cfg.psd.segment_length);
  psd.number("overlap", cfg.psd.overlap);
  psd.text("window", cfg.psd.window, {"hann", "rectangular"});
  psd.number("fit_omega_min", cfg.psd.fit_omega_min);
  psd.number("fit_omega_max", cfg.psd.fit_omega_max);
  psd.finish();

  Section cal(subtable(root, "calibration"), "calibration");
  cal.number("reference_conversion", cfg.calibration.reference_conversion);
  cal.number("bias_tolerance", cfg.calibration.bias_tolerance);
  cal.finish();

  Section sen(subtable(root, "sensing"), "sensing");
  sen.number("bandwidth", cfg.sensing.bandwidth);
  sen.number("measurement_time", cfg.sensing.measurement_time);
  sen.number("temperature", cfg.sensing.temperature);
  sen.number("z_rms", cfg.sensing.z_rms);
  sen.number("q_eff", cfg.sensing.q_eff);
  sen.number("pressure_min", cfg.sensing.pressure_min);
  sen.number("pressure_max", cfg.sensing.pressure_max);
  sen.count("points", cfg.sensing.points);
  sen.number("gw_frequency", cfg.sensing.gw_frequency);
  sen.finish();
  if (cfg.sensing.bandwidth && cfg.sensing.measurement_time) {
    throw ConfigError("sensing.bandwidth and sensing.measurement_time are mutually exclusive");
  }

  // Surface model-level violations as config errors with the field path.
  try {
    make_particle(cfg);
  } catch (const ValidityError& e) {
    throw ConfigError(std::string("[particle] ") + e.what());
  }
  try {
    make_beam(cfg);
  } catch (const ValidityError& e) {
    throw ConfigError(std::string("[beam] ") + e.what());
  }
  try {
    make_gas(cfg);
  } catch (const ValidityError& e) {
    throw ConfigError(std::string("[gas] ") + e.what());
  }
  try {
    cfg.feedback.validate();
  } catch (const ValidityError& e) {
    throw ConfigError(std::string("[feedback] ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

ExperimentConfig builtin_config(std::string_view id) {
  if (id != "time_trace") throw ConfigError("unknown builtin figure '" + std::string(id) + "'");
  // Silica, 200 nm diameter, 1 W, 2 um waist, 1550 nm, 1 mbar, 300 K.
  ExperimentConfig cfg;
  cfg.particle.radius = 100e-9;
  cfg.particle.density = 2200.0;
  cfg.particle.refractive_index = 1.45;
  cfg.beam.power = 1.0;
  cfg.beam.waist = 2e-6;
  cfg.beam.wavelength = 1550e-9;
  cfg.gas.pressure = 100.0;
  cfg.gas.temperature = 300.0;
  cfg.simulation.duration = 0.05;
  cfg.simulation.seed = 1;
  cfg.simulation.initial = "thermal";
  return cfg;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  using nlohmann::json;
  json j;
  json p{{"shape", cfg.particle.shape},
         {"radius", cfg.particle.radius},
         {"density", cfg.particle.density},
         {"refractive_index", cfg.particle.refractive_index}};
  if (cfg.particle.shape == "disc") p["thickness"] = cfg.particle.thickness;
  if (cfg.particle.surface_temperature) p["surface_temperature"] = *cfg.particle.surface_temperature;
  j["particle"] = p;

  j["beam"] = {{"power", cfg.beam.power},
               {"waist", cfg.beam.waist},
               {"wavelength", cfg.beam.wavelength},
               {"geometry", cfg.beam.geometry},
               {"polarization", cfg.beam.polarization},
               {"xy_asymmetry", cfg.beam.xy_asymmetry},
               {"contrast", cfg.beam.contrast},
               {"cavity_length", cfg.beam.cavity_length},
               {"finesse_disc", cfg.beam.finesse_disc},
               {"mode_volume", cfg.beam.mode_volume},
               {"linewidth", cfg.beam.linewidth}};
  j["gas"] = {{"pressure", cfg.gas.pressure},
              {"temperature", cfg.gas.temperature},
              {"viscosity", cfg.gas.viscosity},
              {"molecular_mass", cfg.gas.molecular_mass},
              {"molecular_diameter", cfg.gas.molecular_diameter},
              {"damping", cfg.gas.damping}};
  j["noise"] = {{"gamma_photon", cfg.noise.gamma_photon},
                {"Gamma_fb", cfg.noise.Gamma_fb},
                {"Gamma_other", cfg.noise.Gamma_other}};

  const char* kind = cfg.feedback.kind == feedback::Kind::cold_damping ? "cold_damping"
                     : cfg.feedback.kind == feedback::Kind::parametric ? "parametric"
                                                                       : "none";
  json axes = json::array();
  for (Axis a : kAxes) {
    if (cfg.feedback.axes[index(a)]) axes.push_back(std::string(axis_name(a)));
  }
  json fb{{"kind", kind},
          {"gain", cfg.feedback.gain},
          {"measurement_delay", cfg.feedback.measurement_delay},
          {"measurement_noise_psd", cfg.feedback.measurement_noise_psd},
          {"velocity_estimator",
           cfg.feedback.velocity == feedback::VelocityEstimator::ideal ? "ideal" : "two_point"},
          {"axes", axes}};
  if (cfg.feedback.force_saturation) fb["force_saturation"] = *cfg.feedback.force_saturation;
  j["feedback"] = fb;

  const auto& rm = cfg.readout.model;
  j["readout"] = {{"axis", cfg.readout.axis},
                  {"conversion", rm.conversion},
                  {"shot_noise_floor", rm.shot_noise_floor},
                  {"reference_phase", rm.reference_phase},
                  {"local_oscillator_power", rm.local_oscillator_power},
                  {"signal_power", rm.signal_power},
                  {"heterodyne_offset", rm.heterodyne_offset},
                  {"balanced", rm.balanced}};

  const auto& s = cfg.simulation;
  json sim{{"dt", s.dt},
           {"seed", s.seed},
           {"n_runs", s.n_runs},
           {"record_stride", s.record_stride},
           {"initial", s.initial},
           {"x0", s.x0},
           {"v0", s.v0},
           {"thermal_noise", s.thermal_noise},
           {"recoil", s.recoil},
           {"duffing", s.duffing}};
  if (s.duration) sim["duration"] = *s.duration;
  j["simulation"] = sim;

  j["psd"] = {{"segment_length", cfg.psd.segment_length},
              {"overlap", cfg.psd.overlap},
              {"window", cfg.psd.window},
              {"fit_omega_min", cfg.psd.fit_omega_min},
              {"fit_omega_max", cfg.psd.fit_omega_max}};

  json cal{{"bias_tolerance", cfg.calibration.bias_tolerance}};
  if (cfg.calibration.reference_conversion) {
    cal["reference_conversion"] = *cfg.calibration.reference_conversion;
  }
  j["calibration"] = cal;

  const auto& se = cfg.sensing;
  json sen{{"z_rms", se.z_rms},
           {"q_eff", se.q_eff},
           {"pressure_min", se.pressure_min},
           {"pressure_max", se.pressure_max},
           {"points", se.points}};
  if (se.bandwidth) sen["bandwidth"] = *se.bandwidth;
  if (se.measurement_time) sen["measurement_time"] = *se.measurement_time;
  if (se.temperature) sen["temperature"] = *se.temperature;
  if (se.gw_frequency) sen["gw_frequency"] = *se.gw_frequency;
  j["sensing"] = sen;
  return j;
}

std::string fingerprint(const ExperimentConfig& cfg) {
  const std::string canonical = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Particle make_particle(const ExperimentConfig& cfg) {
  const auto& p = cfg.particle;
  Shape shape = Sphere{};
  if (p.shape == "disc") shape = Disc{p.thickness};
  return Particle(p.radius, p.density, p.refractive_index, shape, p.surface_temperature);
}

Beam make_beam(const ExperimentConfig& cfg) {
  const auto& b = cfg.beam;
  BeamGeometry geometry = SingleTweezer{};
  if (b.geometry == "standing_wave") {
    geometry = StandingWave{b.cavity_length, b.finesse_disc, b.mode_volume, b.linewidth, b.contrast};
  }
  return Beam(b.power, b.waist, b.wavelength, geometry,
              {b.polarization[0], b.polarization[1], b.polarization[2]}, b.xy_asymmetry);
}

GasEnvironment make_gas(const ExperimentConfig& cfg) {
  const auto& g = cfg.gas;
  return GasEnvironment(g.pressure, g.temperature, g.viscosity, g.molecular_mass,
                        g.molecular_diameter);
}

noise::DampingModel damping_model(const ExperimentConfig& cfg) {
  if (cfg.gas.damping == "knudsen") return noise::DampingModel::knudsen;
  if (cfg.gas.damping == "free_molecular") return noise::DampingModel::free_molecular;
  return noise::DampingModel::automatic;
}

}  // namespace levisim::app
