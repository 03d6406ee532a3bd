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

#include "levisim/error.hpp"
#include "levisim/feedback.hpp"
#include "oracles.hpp"

namespace levisim::feedback {
namespace {

Controller cold(double gain) {
  Controller c;
  c.kind = Kind::cold_damping;
  c.gain = gain;
  return c;
}

TEST(Controller, SignalAndForceForms) {
  const Controller c = cold(3.0);
  EXPECT_DOUBLE_EQ(feedback_signal(c, 2.0, 5.0), 15.0);
  EXPECT_DOUBLE_EQ(feedback_force(c, 2.0, 5.0, 0.5), -7.5);
  Controller p;
  p.kind = Kind::parametric;
  p.gain = 4.0;
  EXPECT_DOUBLE_EQ(feedback_signal(p, 2.0, 5.0), 40.0);
  EXPECT_DOUBLE_EQ(feedback_force(p, 2.0, 5.0, 0.5), -40.0);
  EXPECT_EQ(feedback_force(Controller{}, 2.0, 5.0, 0.5), 0.0);
  EXPECT_EQ(c.damping_rate(), 3.0);
  EXPECT_EQ(p.damping_rate(), 0.0);
}

TEST(Controller, ParametricForceOpposesEnergyGrowth) {
  Controller p;
  p.kind = Kind::parametric;
  p.gain = 1e12;
  for (double q : {-1e-8, 2e-8}) {
    for (double v : {-1e-3, 1e-3}) {
      EXPECT_LE(feedback_force(p, q, v, 1e-18) * v, 0.0);
    }
  }
}

TEST(Controller, SaturationClampsForce) {
  Controller c = cold(100.0);
  c.force_saturation = 1e-3;
  EXPECT_DOUBLE_EQ(feedback_force(c, 0.0, 1.0, 1.0), -1e-3);
  EXPECT_DOUBLE_EQ(feedback_force(c, 0.0, -1.0, 1.0), 1e-3);
  EXPECT_DOUBLE_EQ(feedback_force(c, 0.0, 1e-6, 1.0), -1e-4);
}

TEST(Controller, ValidateRejectsNegativeParameters) {
  EXPECT_THROW(cold(-1.0).validate(), ValidityError);
  Controller c = cold(1.0);
  c.measurement_delay = -1e-6;
  EXPECT_THROW(c.validate(), ValidityError);
  c = cold(1.0);
  c.measurement_noise_psd = -1.0;
  EXPECT_THROW(c.validate(), ValidityError);
  c = cold(1.0);
  c.force_saturation = 0.0;
  EXPECT_THROW(c.validate(), ValidityError);
  EXPECT_NO_THROW(cold(1.0).validate());
}

TEST(Prediction, ColdDampingTemperature) {
  EXPECT_DOUBLE_EQ(predicted_temperature_cold_damping(300.0, 10.0, 90.0), 30.0);
  EXPECT_DOUBLE_EQ(predicted_temperature_cold_damping(300.0, 10.0, 0.0), 300.0);
  EXPECT_THROW(predicted_temperature_cold_damping(300.0, 0.0, 1.0), ValidityError);
}

TEST(Prediction, PhononBudgetWithFeedback) {
  noise::NoiseBudget nb;
  nb.gamma_gas = 2.0;
  nb.Gamma_th = {100.0, 200.0, 300.0};
  nb.Gamma_sc = {10.0, 20.0, 20.0};
  EXPECT_DOUBLE_EQ(phonon_budget_with_feedback(nb, cold(8.0), Axis::y), 22.0);
  Controller p;
  p.kind = Kind::parametric;
  EXPECT_THROW(phonon_budget_with_feedback(nb, p, Axis::y), ValidityError);
}

TEST(Loop, DelayedIdealVelocity) {
  Controller c = cold(2.0);
  c.velocity = VelocityEstimator::ideal;
  c.measurement_delay = 3e-6;
  Loop loop(c, 1e-6, 0.5, 1, 0);
  EXPECT_EQ(loop.delay_steps(), 3u);
  std::vector<Vec3> forces;
  for (int k = 0; k < 8; ++k) forces.push_back(loop.update({}, {double(k), 0.0, 0.0}));
  for (int k = 0; k < 3; ++k) EXPECT_EQ(forces[k].x, 0.0);
  for (int k = 3; k < 8; ++k) EXPECT_DOUBLE_EQ(forces[k].x, -0.5 * 2.0 * (k - 3));
}

TEST(Loop, TwoPointVelocityIsExactForLinearMotion) {
  Loop loop(cold(1.0), 1e-3, 1.0, 1, 0);
  Vec3 f;
  for (int k = 0; k < 5; ++k) f = loop.update({0.0, 0.0, 2.0 + 0.5 * k * 1e-3}, {});
  EXPECT_NEAR(f.z, -0.5, 1e-9);
}

TEST(Loop, DisabledAxesReceiveNoForce) {
  Controller c = cold(1.0);
  c.velocity = VelocityEstimator::ideal;
  c.axes = {true, false, true};
  Loop loop(c, 1e-3, 1.0, 1, 0);
  const Vec3 f = loop.update({}, {1.0, 1.0, 1.0});
  EXPECT_EQ(f.x, -1.0);
  EXPECT_EQ(f.y, 0.0);
  EXPECT_EQ(f.z, -1.0);
}

TEST(Loop, MeasurementNoiseEntersThroughEstimator) {
  Controller c = cold(10.0);
  c.measurement_noise_psd = 1e-20;
  const double dt = 1e-5;
  Loop loop(c, dt, 1.0, 3, 0);
  std::vector<double> fx;
  for (int k = 0; k < 100000; ++k) fx.push_back(loop.update({}, {}).x);
  fx.erase(fx.begin());
  const double sigma2 = c.measurement_noise_psd / dt;
  const double expect = 10.0 * 10.0 * 2.0 * sigma2 / (dt * dt);
  EXPECT_NEAR(oracle::variance(fx), expect, 0.03 * expect);
}

TEST(Loop, IsDeterministicPerRun) {
  Controller c = cold(10.0);
  c.measurement_noise_psd = 1e-20;
  Loop a(c, 1e-5, 1.0, 3, 4);
  Loop b(c, 1e-5, 1.0, 3, 4);
  Loop other(c, 1e-5, 1.0, 3, 5);
  bool differs = false;
  for (int k = 0; k < 100; ++k) {
    const Vec3 fa = a.update({}, {});
    EXPECT_EQ(fa, b.update({}, {}));
    differs = differs || !(fa == other.update({}, {}));
  }
  EXPECT_TRUE(differs);
}

}  // namespace
}  // namespace levisim::feedback
