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

#include <gtest/gtest.h>

#include "levisim/rng.hpp"
#include "oracles.hpp"

namespace levisim::rng {
namespace {

// Known-answer vectors published with the Random123 reference implementation.
TEST(Philox, KnownAnswerZero) {
  const auto out = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (Philox4x32::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(Philox, KnownAnswerOnes) {
  const auto out = Philox4x32::generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                                        {0xffffffff, 0xffffffff});
  EXPECT_EQ(out, (Philox4x32::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Philox, KnownAnswerPi) {
  const auto out = Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                                        {0xa4093822, 0x299f31d0});
  EXPECT_EQ(out, (Philox4x32::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Stream, SameIdentifiersGiveSameSequence) {
  Stream a(42, Channel::thermal_x, 3);
  Stream b(42, Channel::thermal_x, 3);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.normal(), b.normal());
}

TEST(Stream, IdentifiersSelectDistinctSequences) {
  Stream base(42, Channel::thermal_x, 0);
  Stream other_seed(43, Channel::thermal_x, 0);
  Stream other_channel(42, Channel::thermal_y, 0);
  Stream other_run(42, Channel::thermal_x, 1);
  const double v = base.normal();
  EXPECT_NE(v, other_seed.normal());
  EXPECT_NE(v, other_channel.normal());
  EXPECT_NE(v, other_run.normal());
}

TEST(Stream, SeekReproducesLaterBlocks) {
  Stream a(7, Channel::recoil_z, 2);
  std::vector<double> seq;
  for (int i = 0; i < 20; ++i) seq.push_back(a.normal());
  Stream b(7, Channel::recoil_z, 2);
  b.seek(5);
  EXPECT_EQ(b.normal(), seq[10]);
  EXPECT_EQ(b.normal(), seq[11]);
}

TEST(Stream, NormalMoments) {
  Stream s(2024, Channel::thermal_z, 0);
  const int n = 400000;
  double m1 = 0.0;
  double m2 = 0.0;
  double m4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s.normal();
    m1 += x;
    m2 += x * x;
    m4 += x * x * x * x;
  }
  m1 /= n;
  m2 /= n;
  m4 /= n;
  EXPECT_NEAR(m1, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(m2, 1.0, 5.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(m4, 3.0, 5.0 * std::sqrt(96.0 / n));
}

TEST(Stream, UniformRangeAndMean) {
  Stream s(5, Channel::initial_conditions, 0);
  const int n = 200000;
  double sum = 0.0;
  std::vector<int> bins(10, 0);
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
    sum += u;
    ++bins[std::min(9, static_cast<int>(u * 10))];
  }
  EXPECT_NEAR(sum / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
  double chi2 = 0.0;
  for (int b : bins) chi2 += (b - n / 10.0) * (b - n / 10.0) / (n / 10.0);
  EXPECT_LT(chi2, 30.0);  // 9 dof, p < 1e-3
}

TEST(Stream, ChannelsAreUncorrelated) {
  Stream a(11, Channel::thermal_x, 0);
  Stream b(11, Channel::thermal_y, 0);
  Stream c(11, Channel::thermal_x, 1);
  const int n = 200000;
  double ab = 0.0;
  double ac = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = a.normal();
    ab += x * b.normal();
    ac += x * c.normal();
  }
  EXPECT_NEAR(ab / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(ac / n, 0.0, 5.0 / std::sqrt(n));
}

TEST(Stream, LagOneAutocorrelationVanishes) {
  Stream s(99, Channel::measurement_x, 0);
  const int n = 200000;
  double prev = s.normal();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s.normal();
    acc += x * prev;
    prev = x;
  }
  EXPECT_NEAR(acc / n, 0.0, 5.0 / std::sqrt(n));
}

}  // namespace
}  // namespace levisim::rng
