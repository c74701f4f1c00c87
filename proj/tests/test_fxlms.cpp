#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "mvip/errors.hpp"
#include "mvip/fxlms.hpp"

namespace mvip {
namespace {

// Primary path: gain 0.8. Secondary path: one-sample delay, matching the
// default path estimate. Returns the residual reduction in dB after `seconds`.
double tone_reduction_db(FxLmsParams p, double freq, double seconds) {
  FxLmsChannel ch(p);
  const double fs = 2000.0;
  const int n = static_cast<int>(seconds * fs);
  double u_prev = 0.0;
  double tail = 0.0;
  double ref = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = std::sin(2.0 * std::numbers::pi * freq * k / fs);
    const double e = 0.8 * x - u_prev;
    u_prev = ch.step(x, e);
    if (k >= n - 2000) {
      tail += e * e;
      ref += 0.64 * x * x;
    }
  }
  return 10.0 * std::log10(ref / tail);
}

TEST(FxLms, ConvergesOnMatchedTone) {
  EXPECT_GT(tone_reduction_db(FxLmsParams{}, 50.0, 5.0), 20.0);
}

TEST(FxLms, MeanPowerNormalizationFasterThanSumOfSquares) {
  FxLmsParams sos;
  sos.normalization = LmsNormalization::SumOfSquares;
  EXPECT_GT(tone_reduction_db(FxLmsParams{}, 50.0, 5.0), tone_reduction_db(sos, 50.0, 5.0));
}

TEST(FxLms, ZeroErrorLeavesWeightsAtZero) {
  FxLmsChannel ch;
  for (int k = 0; k < 500; ++k) EXPECT_EQ(ch.step(std::sin(0.1 * k), 0.0), 0.0);
  for (double w : ch.weights()) EXPECT_EQ(w, 0.0);
}

TEST(FxLms, LeakageShrinksWeights) {
  FxLmsChannel ch;
  for (int k = 0; k < 200; ++k) ch.step(std::sin(0.3 * k), 0.5 * std::sin(0.3 * k));
  double before = 0.0;
  for (double w : ch.weights()) before += w * w;
  ASSERT_GT(before, 0.0);
  for (int k = 0; k < 200; ++k) ch.step(0.0, 0.0);
  double after = 0.0;
  for (double w : ch.weights()) after += w * w;
  EXPECT_LT(after, before * std::pow(0.998, 2 * 200) * 1.0001);
}

TEST(FxLms, NonFiniteErrorLatchesFault) {
  FxLmsChannel ch;
  ch.step(1.0, 0.3);
  ch.step(0.5, std::numeric_limits<double>::quiet_NaN());
  EXPECT_TRUE(ch.faulted());
  for (double w : ch.weights()) EXPECT_EQ(w, 0.0);
  EXPECT_EQ(ch.step(1.0, 0.1), 0.0);
  ch.reset();
  EXPECT_FALSE(ch.faulted());
}

TEST(FxLms, WeightsStayFiniteUnderRandomInput) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 10.0);
  FxLmsChannel ch;
  for (int k = 0; k < 20000; ++k) ch.step(n(rng), n(rng));
  EXPECT_FALSE(ch.faulted());
  for (double w : ch.weights()) EXPECT_TRUE(std::isfinite(w));
}

TEST(FxLms, ValidateRejectsBadParameters) {
  FxLmsParams p;
  p.filter_length = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.mu = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.lambda = 1.5;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.secondary_path.clear();
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.p = -1.0;
  EXPECT_THROW(p.validate(), ConfigError);
}

}  // namespace
}  // namespace mvip
