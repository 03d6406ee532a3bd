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

#include "levisim/detection.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <mutex>
#include <numeric>

#include "levisim/constants.hpp"
#include "levisim/error.hpp"
#include "levisim/rng.hpp"

namespace levisim::detection {

using constants::k_B;
using constants::pi;

void ReadoutModel::validate() const {
  if (!(local_oscillator_power >= 0.0) || !(signal_power >= 0.0)) {
    throw ValidityError("readout powers must be >= 0");
  }
  if (!(shot_noise_floor >= 0.0)) throw ValidityError("shot-noise floor must be >= 0");
  if (!std::isfinite(conversion)) throw ValidityError("readout conversion must be finite");
}

double photodetector_power(const ReadoutModel& rm, double phi_s, double e_r, double e_s) {
  const double interference = 2.0 * e_r * e_s * std::cos(phi_s - rm.reference_phase);
  const double p = e_r * e_r + interference + e_s * e_s;
  return rm.balanced ? p - e_r * e_r : p;
}

double photodetector_power(const ReadoutModel& rm, double phi_s) {
  rm.validate();
  return photodetector_power(rm, phi_s, std::sqrt(rm.local_oscillator_power),
                             std::sqrt(rm.signal_power));
}

std::vector<double> synthesize_readout(const dynamics::Trajectory& traj, Axis axis,
                                       const ReadoutModel& rm, std::uint64_t seed) {
  rm.validate();
  const std::vector<double>& q = traj.position(axis);
  std::vector<double> out(q.size());
  const double sigma = traj.dt > 0.0 ? std::sqrt(rm.shot_noise_floor / traj.dt) : 0.0;
  rng::Stream noise(seed, rng::Channel::readout, traj.run);
  for (std::size_t i = 0; i < q.size(); ++i) {
    double v = rm.conversion * q[i];
    if (rm.heterodyne_offset != 0.0) v *= std::cos(rm.heterodyne_offset * traj.time(i));
    if (sigma > 0.0) v += sigma * noise.normal();
    out[i] = v;
  }
  return out;
}

std::string_view window_name(Window w) {
  return w == Window::hann ? "hann" : "rectangular";
}

Window window_from_name(std::string_view name) {
  if (name == "hann") return Window::hann;
  if (name == "rectangular" || name == "boxcar") return Window::rectangular;
  throw ValidityError("unknown window '" + std::string(name) + "'");
}

double Spectrum::variance() const {
  if (omega.size() < 2) return 0.0;
  const double dw = omega[1] - omega[0];
  double sum = psd.front();
  for (std::size_t k = 1; k + 1 < psd.size(); ++k) sum += 2.0 * psd[k];
  // The last bin is the Nyquist bin for even segments, counted once.
  sum += (segment_length % 2 == 0 ? 1.0 : 2.0) * psd.back();
  return sum * dw / (2.0 * pi);
}

namespace {

std::size_t segment_count(std::size_t n, std::size_t len, std::size_t step) {
  return (n - len) / step + 1;
}

std::vector<double> make_window(Window w, std::size_t n) {
  std::vector<double> out(n, 1.0);
  if (w == Window::hann) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = 0.5 * (1.0 - std::cos(2.0 * pi * static_cast<double>(i) / static_cast<double>(n)));
    }
  }
  return out;
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// Periodogram correlation between segments shifted by `shift` samples.
double overlap_correlation(const std::vector<double>& w, std::size_t shift) {
  if (shift >= w.size()) return 0.0;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    den += w[i] * w[i];
    if (i + shift < w.size()) num += w[i] * w[i + shift];
  }
  return (num / den) * (num / den);
}

}  // namespace

std::size_t default_segment_length(std::size_t n) {
  std::size_t len = 2;
  while (2 * len <= n && segment_count(n, 2 * len, len) >= 8) len *= 2;
  return len;
}

Spectrum welch_psd(const std::vector<double>& series, double sample_rate, const WelchOptions& opts) {
  if (!(sample_rate > 0.0)) throw ValidityError("sample rate must be > 0");
  if (!(opts.overlap >= 0.0 && opts.overlap <= 0.9)) {
    throw ValidityError("Welch overlap must lie in [0, 0.9]");
  }
  const std::size_t n = series.size();
  const std::size_t len = opts.segment_length > 0 ? opts.segment_length : default_segment_length(n);
  if (len < 2) throw ValidityError("Welch segment length must be >= 2");
  if (len > n) throw ValidityError("series is shorter than one Welch segment");
  const auto overlap_samples =
      static_cast<std::size_t>(std::llround(opts.overlap * static_cast<double>(len)));
  const std::size_t step = std::max<std::size_t>(1, len - overlap_samples);
  const std::size_t segments = segment_count(n, len, step);

  const std::vector<double> w = make_window(opts.window, len);
  const double w2 = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
  const std::size_t bins = len / 2 + 1;

  double* in = fftw_alloc_real(len);
  fftw_complex* out = fftw_alloc_complex(bins);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(len), in, out, FFTW_ESTIMATE);
  }

  std::vector<double> acc(bins, 0.0);
  for (std::size_t s = 0; s < segments; ++s) {
    const double* seg = series.data() + s * step;
    double mean = 0.0;
    if (opts.detrend_mean) mean = std::accumulate(seg, seg + len, 0.0) / static_cast<double>(len);
    for (std::size_t i = 0; i < len; ++i) in[i] = (seg[i] - mean) * w[i];
    fftw_execute(plan);
    for (std::size_t k = 0; k < bins; ++k) acc[k] += out[k][0] * out[k][0] + out[k][1] * out[k][1];
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);

  Spectrum sp;
  sp.window = std::string(window_name(opts.window));
  sp.segment_length = len;
  sp.segments = segments;
  sp.overlap = static_cast<double>(len - step) / static_cast<double>(len);
  sp.sample_rate = sample_rate;
  sp.omega.resize(bins);
  sp.psd.resize(bins);
  const double scale = 1.0 / (sample_rate * w2 * static_cast<double>(segments));
  for (std::size_t k = 0; k < bins; ++k) {
    sp.omega[k] = 2.0 * pi * sample_rate * static_cast<double>(k) / static_cast<double>(len);
    sp.psd[k] = acc[k] * scale;
  }

  double ratio = 1.0;
  const auto kseg = static_cast<double>(segments);
  for (std::size_t j = 1; j < segments && j * step < len; ++j) {
    ratio += 2.0 * (1.0 - static_cast<double>(j) / kseg) * overlap_correlation(w, j * step);
  }
  sp.dof = 2.0 * kseg / ratio;
  return sp;
}

double lorentzian_psd(double omega, double amplitude, double omega_m, double gamma, double floor) {
  const double d = omega_m * omega_m - omega * omega;
  return amplitude * gamma / (d * d + omega * omega * gamma * gamma) + floor;
}

double LorentzianFit::evaluate(double omega) const {
  return lorentzian_psd(omega, amplitude, omega_m, gamma, floor);
}

double LorentzianFit::peak_height() const { return amplitude / (omega_m * omega_m * gamma); }

double LorentzianFit::area() const { return amplitude / (2.0 * omega_m * omega_m); }

double LorentzianFit::sigma(std::size_t i) const { return std::sqrt(covariance.at(i).at(i)); }

namespace {

struct Band {
  std::vector<double> omega;
  std::vector<double> y;  // log PSD, bias corrected
  std::vector<double> s;  // raw PSD
};

double quantile(std::vector<double> v, double q) {
  const auto k = static_cast<std::size_t>(q * static_cast<double>(v.size() - 1));
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  return v[k];
}

using Vec4 = Eigen::Vector4d;

double model_log_and_jacobian(double w, const Vec4& p, Eigen::RowVector4d* jac) {
  const double a = std::exp(p[0]);
  const double wm = std::exp(p[1]);
  const double g = std::exp(p[2]);
  const double f = std::exp(p[3]);
  const double d = wm * wm - w * w;
  const double den = d * d + w * w * g * g;
  const double lor = a * g / den;
  const double m = lor + f;
  if (jac) {
    (*jac)[0] = lor / m;
    (*jac)[1] = -4.0 * wm * wm * d * lor / den / m;
    (*jac)[2] = lor * (1.0 - 2.0 * w * w * g * g / den) / m;
    (*jac)[3] = f / m;
  }
  return std::log(m);
}

double cost(const Band& b, const Vec4& p) {
  double c = 0.0;
  for (std::size_t i = 0; i < b.omega.size(); ++i) {
    const double r = model_log_and_jacobian(b.omega[i], p, nullptr) - b.y[i];
    c += r * r;
  }
  return c;
}

}  // namespace

LorentzianFit lorentzian_fit(const Spectrum& sp, const FitOptions& opts) {
  if (sp.size() < 8) throw ValidityError("spectrum too short to fit");
  const double w_lo = opts.omega_min > 0.0 ? opts.omega_min : sp.omega[1];
  const double w_hi = opts.omega_max > 0.0 ? opts.omega_max : sp.omega.back();
  double bias = 0.0;
  if (opts.log_bias_correction && sp.dof > 0.0) {
    const double h = 0.5 * sp.dof;
    bias = boost::math::digamma(h) - std::log(h);
  }

  Band band;
  for (std::size_t k = 0; k < sp.size(); ++k) {
    if (sp.omega[k] < w_lo || sp.omega[k] > w_hi || !(sp.psd[k] > 0.0)) continue;
    band.omega.push_back(sp.omega[k]);
    band.s.push_back(sp.psd[k]);
    band.y.push_back(std::log(sp.psd[k]) - bias);
  }
  const std::size_t n = band.omega.size();
  if (n < 8) throw ValidityError("fewer than 8 usable bins in the fit band");

  // Initial guesses from a 5-bin running mean.
  std::vector<double> smooth(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= 2 ? i - 2 : 0;
    const std::size_t hi = std::min(n - 1, i + 2);
    double acc = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) acc += band.s[j];
    smooth[i] = acc / static_cast<double>(hi - lo + 1);
  }
  const auto ipk = static_cast<std::size_t>(
      std::distance(smooth.begin(), std::max_element(smooth.begin(), smooth.end())));
  const double peak = smooth[ipk];
  const double floor0 = quantile(smooth, 0.1);
  if (!(peak > opts.min_peak_to_floor * floor0)) {
    throw ValidityError("spectrum has no resolved peak (peak/floor <= " +
                        std::to_string(opts.min_peak_to_floor) + ")");
  }
  const double half = floor0 + 0.5 * (peak - floor0);
  std::size_t il = ipk;
  while (il > 0 && smooth[il] > half) --il;
  std::size_t ir = ipk;
  while (ir + 1 < n && smooth[ir] > half) ++ir;
  const double dw = band.omega.size() > 1 ? band.omega[1] - band.omega[0] : 1.0;
  const double wm0 = band.omega[ipk];
  const double g0 = std::max(band.omega[ir] - band.omega[il], dw);
  const double a0 = (peak - floor0) * wm0 * wm0 * g0;

  Vec4 p(std::log(a0), std::log(wm0), std::log(g0), std::log(0.5 * floor0));
  double c = cost(band, p);
  double lambda = 1e-3;
  int it = 0;
  bool converged = false;
  Eigen::MatrixXd jac(n, 4);
  Eigen::VectorXd r(n);
  for (; it < opts.max_iterations && !converged; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      Eigen::RowVector4d row;
      r[static_cast<Eigen::Index>(i)] =
          model_log_and_jacobian(band.omega[i], p, &row) - band.y[i];
      jac.row(static_cast<Eigen::Index>(i)) = row;
    }
    const Eigen::Matrix4d h = jac.transpose() * jac;
    const Vec4 grad = jac.transpose() * r;
    for (;;) {
      Eigen::Matrix4d damped = h;
      damped.diagonal() += lambda * h.diagonal().cwiseMax(1e-12);
      const Vec4 step = damped.ldlt().solve(-grad);
      const Vec4 trial = p + step;
      const double ct = cost(band, trial);
      if (std::isfinite(ct) && ct <= c) {
        const double gain = c - ct;
        p = trial;
        c = ct;
        lambda = std::max(lambda / 10.0, 1e-12);
        if (gain <= 1e-14 * c + 1e-300 || step.cwiseAbs().maxCoeff() < 1e-12) converged = true;
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e16) {
        converged = true;
        break;
      }
    }
  }
  if (!converged) {
    throw NumericalError("Lorentzian fit did not converge in " +
                         std::to_string(opts.max_iterations) + " iterations");
  }

  LorentzianFit fit;
  fit.amplitude = std::exp(p[0]);
  fit.omega_m = std::exp(p[1]);
  fit.gamma = std::exp(p[2]);
  fit.floor = std::exp(p[3]);
  fit.iterations = it;
  fit.residual_rms = std::sqrt(c / static_cast<double>(n));

  for (std::size_t i = 0; i < n; ++i) {
    Eigen::RowVector4d row;
    model_log_and_jacobian(band.omega[i], p, &row);
    jac.row(static_cast<Eigen::Index>(i)) = row;
  }
  const double s2 = n > 4 ? c / static_cast<double>(n - 4) : 0.0;
  const Eigen::Matrix4d cov_log =
      s2 * (jac.transpose() * jac).completeOrthogonalDecomposition().pseudoInverse();
  const Vec4 lin(fit.amplitude, fit.omega_m, fit.gamma, fit.floor);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const auto ei = static_cast<Eigen::Index>(i);
      const auto ej = static_cast<Eigen::Index>(j);
      fit.covariance[i][j] = lin[ei] * lin[ej] * cov_log(ei, ej);
    }
  }
  return fit;
}

Calibration calibrate_volts_to_meters(const Spectrum& voltage, double mass, double temperature,
                                      const CalibrationOptions& opts) {
  if (!(mass > 0.0) || !(temperature > 0.0)) {
    throw ValidityError("calibration needs mass > 0 and temperature > 0");
  }
  Calibration cal;
  cal.fit = lorentzian_fit(voltage, opts.fit);
  cal.conversion = std::sqrt(cal.fit.amplitude * mass / (2.0 * k_B * temperature));
  cal.uncertainty = 0.5 * cal.conversion * cal.fit.sigma(0) / cal.fit.amplitude;
  if (opts.reference_conversion) {
    if (!(*opts.reference_conversion > 0.0)) {
      throw ValidityError("reference conversion must be > 0");
    }
    const double ratio = cal.conversion / *opts.reference_conversion;
    cal.bias_ratio = ratio;
    const double tol = std::max(opts.bias_tolerance, 3.0 * cal.uncertainty / cal.conversion);
    cal.hot_particle_suspected = std::abs(ratio - 1.0) > tol;
  }
  return cal;
}

}  // namespace levisim::detection
