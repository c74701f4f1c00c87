#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace mvip {

struct Tone {
  double frequency = 0.0;  ///< Hz
  double amplitude = 0.0;  ///< m/s^2
};

struct DisturbanceSpec {
  double random_level = 0.0;  ///< one-sided PSD of the base noise, (m/s^2)^2/Hz
  double band_lo = 0.5;       ///< Hz
  double band_hi = 300.0;     ///< Hz
  std::vector<Tone> tones;
  int axis = 0;               ///< pose channel excited, 0..5
  std::uint64_t seed = 1;

  bool has_tone(double frequency, double tol = 1e-9) const;
};

/// Base acceleration along the spec axis: band-limited Gaussian noise plus
/// pure tones, sampled at `rate`. Throws ConfigError when a tone or the
/// noise band is at or above Nyquist.
Eigen::VectorXd generate_disturbance(const DisturbanceSpec& spec, double duration, double rate);

}  // namespace mvip
