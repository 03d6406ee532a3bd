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

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "levisim/detection.hpp"
#include "levisim/rng.hpp"

namespace {

std::vector<double> noise(std::size_t n) {
  levisim::rng::Stream s(3, levisim::rng::Channel::thermal_x, 0);
  std::vector<double> v(n);
  for (double& x : v) x = s.normal();
  return v;
}

void BM_Welch(benchmark::State& state) {
  const auto series = noise(static_cast<std::size_t>(state.range(0)));
  levisim::detection::WelchOptions o;
  o.segment_length = 4096;
  for (auto _ : state) benchmark::DoNotOptimize(levisim::detection::welch_psd(series, 1e5, o).psd.data());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Welch)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_LorentzianFit(benchmark::State& state) {
  levisim::detection::Spectrum sp;
  const std::size_t n = 4097;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 100.0 * static_cast<double>(i);
    sp.omega.push_back(w);
    sp.psd.push_back(levisim::detection::lorentzian_psd(w, 1e-3, 1e5, 2e3, 1e-22));
  }
  sp.dof = 100.0;
  levisim::detection::FitOptions fo;
  fo.omega_min = 2.5e4;
  fo.omega_max = 3e5;
  for (auto _ : state) benchmark::DoNotOptimize(levisim::detection::lorentzian_fit(sp, fo).omega_m);
}
BENCHMARK(BM_LorentzianFit)->Unit(benchmark::kMicrosecond);

}  // namespace
