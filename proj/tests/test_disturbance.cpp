#include <cmath>

#include <gtest/gtest.h>

#include "mvip/disturbance.hpp"
#include "mvip/errors.hpp"
#include "mvip/metrics.hpp"

namespace mvip {
namespace {

TEST(Disturbance, NoisePsdIsFlatInBand) {
  DisturbanceSpec s;
  s.random_level = 1e-4;
  const double rate = 2000.0;
  const Eigen::VectorXd x = generate_disturbance(s, 200.0, rate);
  const Psd psd = welch_psd(x, rate, 4000);
  double sum = 0.0;
  int count = 0;
  double lo = 1e300;
  double hi = 0.0;
  for (Eigen::Index i = 0; i < psd.frequency.size(); ++i) {
    const double f = psd.frequency[i];
    if (f >= 5.0 && f <= 150.0) {
      sum += psd.power[i];
      ++count;
      lo = std::min(lo, psd.power[i]);
      hi = std::max(hi, psd.power[i]);
    }
  }
  EXPECT_NEAR(sum / count, s.random_level, 0.05 * s.random_level);
  EXPECT_LT(hi / lo, 3.0);
}

TEST(Disturbance, NoiseOutsideBandSuppressed) {
  DisturbanceSpec s;
  s.random_level = 1e-4;
  s.band_hi = 100.0;
  const Eigen::VectorXd x = generate_disturbance(s, 100.0, 2000.0);
  const Psd psd = welch_psd(x, 2000.0, 4000);
  for (Eigen::Index i = 0; i < psd.frequency.size(); ++i) {
    if (psd.frequency[i] > 400.0) EXPECT_LT(psd.power[i], 1e-2 * s.random_level);
  }
}

TEST(Disturbance, TonesOnly) {
  DisturbanceSpec s;
  s.tones = {{50.0, 0.3}};
  const Eigen::VectorXd x = generate_disturbance(s, 1.0, 2000.0);
  ASSERT_EQ(x.size(), 2000);
  EXPECT_NEAR(x[10], 0.3 * std::sin(2.0 * M_PI * 50.0 * 10.0 / 2000.0), 1e-15);
  EXPECT_TRUE(s.has_tone(50.0));
  EXPECT_FALSE(s.has_tone(51.0));
}

TEST(Disturbance, SeedDeterminism) {
  DisturbanceSpec s;
  s.random_level = 1e-6;
  EXPECT_EQ(generate_disturbance(s, 1.0, 2000.0), generate_disturbance(s, 1.0, 2000.0));
  DisturbanceSpec t = s;
  t.seed = 99;
  EXPECT_NE(generate_disturbance(s, 1.0, 2000.0), generate_disturbance(t, 1.0, 2000.0));
}

TEST(Disturbance, AliasingRejected) {
  DisturbanceSpec s;
  s.tones = {{1200.0, 1.0}};
  EXPECT_THROW(generate_disturbance(s, 1.0, 2000.0), ConfigError);
  DisturbanceSpec n;
  n.random_level = 1.0;
  n.band_hi = 1000.0;
  EXPECT_THROW(generate_disturbance(n, 1.0, 2000.0), ConfigError);
  DisturbanceSpec a;
  a.axis = 6;
  EXPECT_THROW(generate_disturbance(a, 1.0, 2000.0), ConfigError);
}

}  // namespace
}  // namespace mvip
