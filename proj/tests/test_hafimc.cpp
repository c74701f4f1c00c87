#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "mvip/hafimc.hpp"

namespace mvip {
namespace {

HafimcSensors tone_sensors(int k) {
  HafimcSensors s;
  const double t = k / 2000.0;
  s.stator_accel[0] = std::sin(2.0 * std::numbers::pi * 50.0 * t);
  s.floater_accel[0] = 0.1 * std::sin(2.0 * std::numbers::pi * 50.0 * t + 0.3);
  s.relative_pose[0] = 1e-5 * std::sin(2.0 * std::numbers::pi * 50.0 * t);
  return s;
}

TEST(Hafimc, CommandIsImcMinusFeedforward) {
  HafimcController c;
  for (int k = 0; k < 2000; ++k) {
    const HafimcOutput out = c.step(tone_sensors(k));
    EXPECT_LE((out.command - (out.imc - out.feedforward)).norm(), 1e-15);
  }
}

TEST(Hafimc, FeedforwardDisabledGivesPureImc) {
  HafimcParams p;
  p.enable_feedforward = false;
  HafimcController c(p);
  for (int k = 0; k < 500; ++k) {
    const HafimcOutput out = c.step(tone_sensors(k));
    EXPECT_EQ(out.feedforward.norm(), 0.0);
    EXPECT_EQ(out.command, out.imc);
  }
}

TEST(Hafimc, FeedforwardAdaptsOnTone) {
  HafimcController c;
  HafimcOutput out;
  for (int k = 0; k < 4000; ++k) out = c.step(tone_sensors(k));
  EXPECT_GT(std::abs(out.feedforward[0]), 0.0);
  EXPECT_EQ(out.feedforward.tail<5>().norm(), 0.0);
}

TEST(Hafimc, NonFiniteSensorFaults) {
  HafimcController c;
  c.step(tone_sensors(0));
  HafimcSensors bad = tone_sensors(1);
  bad.floater_accel[2] = std::numeric_limits<double>::infinity();
  const HafimcOutput out = c.step(bad);
  EXPECT_TRUE(out.fault);
  EXPECT_EQ(out.command.norm(), 0.0);
  EXPECT_TRUE(c.faulted());
}

TEST(Hafimc, BandPassShape) {
  const FilterChain band = feedforward_band(10.0, 300.0, 2000.0);
  auto mag = [&](double f) { return std::abs(band.response(2.0 * std::numbers::pi * f / 2000.0)); };
  EXPECT_GT(mag(60.0), 0.95);
  EXPECT_LT(mag(1.0), 1e-3);
  EXPECT_NEAR(mag(10.0), std::sqrt(0.5), 0.05);
  EXPECT_LT(mag(900.0), 0.2);
}

}  // namespace
}  // namespace mvip
