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

#include "levisim/rng.hpp"

#include <cmath>

#include "levisim/constants.hpp"

namespace levisim::rng {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

/// 53-bit uniform on (0, 1].
inline double to_unit(std::uint32_t lo, std::uint32_t hi) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

Stream::Stream(std::uint64_t seed, Channel channel, std::uint32_t run)
    : Stream(seed, static_cast<std::uint32_t>(channel), run) {}

Stream::Stream(std::uint64_t seed, std::uint32_t channel, std::uint32_t run)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      channel_(channel),
      run_(run) {}

void Stream::refill() {
  raw_ = Philox4x32::generate(
      {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32), channel_, run_},
      key_);
  ++block_;
  raw_used_ = 0;
}

double Stream::normal() {
  if (cached_ == 0) {
    if (raw_used_ != 0) refill();
    const double u1 = to_unit(raw_[0], raw_[1]);
    const double u2 = to_unit(raw_[2], raw_[3]);
    raw_used_ = 4;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * constants::pi * u2;
    normals_ = {r * std::cos(phi), r * std::sin(phi)};
    cached_ = 2;
  }
  return normals_[static_cast<std::size_t>(2 - cached_--)];
}

double Stream::uniform() {
  if (raw_used_ > 2) refill();
  const double u = to_unit(raw_[static_cast<std::size_t>(raw_used_)],
                           raw_[static_cast<std::size_t>(raw_used_ + 1)]);
  raw_used_ += 2;
  return u;
}

void Stream::seek(std::uint64_t block) {
  block_ = block;
  cached_ = 0;
  raw_used_ = 4;
}

}  // namespace levisim::rng
