#include "mvip/disturbance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "mvip/discrete.hpp"
#include "mvip/errors.hpp"

namespace mvip {

bool DisturbanceSpec::has_tone(double frequency, double tol) const {
  for (const auto& t : tones) {
    if (std::abs(t.frequency - frequency) <= tol * std::max(1.0, frequency)) return true;
  }
  return false;
}

Eigen::VectorXd generate_disturbance(const DisturbanceSpec& spec, double duration, double rate) {
  if (!(duration >= 0.0) || !(rate > 0.0)) {
    throw ConfigError("disturbance: duration must be non-negative and rate positive");
  }
  if (spec.axis < 0 || spec.axis > 5) throw ConfigError("disturbance: axis must be 0..5");
  const double nyquist = 0.5 * rate;
  for (const auto& t : spec.tones) {
    if (!(t.frequency > 0.0) || !(t.frequency < nyquist)) {
      throw ConfigError("disturbance: tone at " + std::to_string(t.frequency) +
                        " Hz aliases at rate " + std::to_string(rate) + " Hz");
    }
  }
  const auto n = static_cast<Eigen::Index>(std::llround(duration * rate));
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);

  if (spec.random_level > 0.0) {
    if (!(spec.band_lo > 0.0) || !(spec.band_hi > spec.band_lo) || !(spec.band_hi < nyquist)) {
      throw ConfigError("disturbance: noise band must satisfy 0 < band_lo < band_hi < Nyquist");
    }
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(spec.random_level * rate / 2.0));
    FilterChain band({butterworth_highpass(2, spec.band_lo, rate),
                      butterworth_lowpass(4, spec.band_hi, rate)});
    for (Eigen::Index k = 0; k < n; ++k) out[k] = band.step(normal(rng));
  }
  for (const auto& t : spec.tones) {
    const double w = 2.0 * std::numbers::pi * t.frequency;
    for (Eigen::Index k = 0; k < n; ++k) {
      out[k] += t.amplitude * std::sin(w * static_cast<double>(k) / rate);
    }
  }
  return out;
}

}  // namespace mvip
