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

#include <benchmark/benchmark.h>

#include "levisim/rng.hpp"

namespace {

void BM_PhiloxNormal(benchmark::State& state) {
  levisim::rng::Stream s(1, levisim::rng::Channel::thermal_x, 0);
  for (auto _ : state) benchmark::DoNotOptimize(s.normal());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxNormal);

void BM_PhiloxUniform(benchmark::State& state) {
  levisim::rng::Stream s(1, levisim::rng::Channel::thermal_x, 0);
  for (auto _ : state) benchmark::DoNotOptimize(s.uniform());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxUniform);

}  // namespace
