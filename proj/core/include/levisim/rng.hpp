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

// Counter-based random numbers. Every draw is a pure function of
// (seed, run, channel, index), so results do not depend on thread count or
// scheduling.

#include <array>
#include <cstdint>

namespace levisim::rng {

/// Philox4x32-10 block function.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key);
};

/// Independent stream identifiers within a run.
enum class Channel : std::uint32_t {
  thermal_x = 0,
  thermal_y = 1,
  thermal_z = 2,
  recoil_x = 3,
  recoil_y = 4,
  recoil_z = 5,
  measurement_x = 6,
  measurement_y = 7,
  measurement_z = 8,
  initial_conditions = 9,
  readout = 10,
};

/// Sequential standard-normal and uniform variates from one
/// (seed, channel, run) stream. Counter layout is
/// {block_lo, block_hi, channel, run} with the seed as key.
class Stream {
 public:
  Stream(std::uint64_t seed, Channel channel, std::uint32_t run = 0);
  Stream(std::uint64_t seed, std::uint32_t channel, std::uint32_t run);

  /// Box-Muller on one block yields two normals.
  double normal();
  /// Uniform on (0, 1].
  double uniform();
  /// Jump to an absolute block index.
  void seek(std::uint64_t block);

 private:
  void refill();

  Philox4x32::Key key_;
  std::uint32_t channel_;
  std::uint32_t run_;
  std::uint64_t block_ = 0;
  std::array<double, 2> normals_{};
  int cached_ = 0;
  std::array<std::uint32_t, 4> raw_{};
  int raw_used_ = 4;
};

}  // namespace levisim::rng
