#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "mvip/types.hpp"

namespace mvip {

enum class ExcitationKind { RGS, SineSweep };

std::string to_string(ExcitationKind kind);
ExcitationKind excitation_from_string(const std::string& name);  ///< "rgs" | "sine_sweep"

struct ExcitationParams {
  ExcitationKind kind = ExcitationKind::RGS;
  double f_l = 0.2;  ///< Hz, sweep start
  double f_h = 6.0;  ///< Hz, sweep end and RGS bandwidth
  Vector6 amplitude{0.009, 0.009, 0.009, 0.025, 0.025, 0.025};  ///< RMS, m and rad
  Vector6 limit{0.022, 0.022, 0.022, 0.07, 0.07, 0.07};         ///< commands are clipped to +-limit
  double sample_rate = 2000.0;
  std::uint64_t seed = 1;
};

/// Position commands, one row per sample and one column per channel.
/// RGS is low-passed white Gaussian noise scaled to the given RMS; the sweep
/// is logarithmic from f_l to f_h over the duration with per-channel phase
/// offsets. Both are clipped to the configured limit.
Eigen::MatrixXd generate_excitation(const ExcitationParams& params, double duration);

/// Instantaneous sweep frequency at time t (Hz).
double sweep_frequency(double f_l, double f_h, double duration, double t);

/// Sample autocorrelation normalized by lag-zero value.
double autocorrelation(const Eigen::VectorXd& x, Eigen::Index lag);

}  // namespace mvip
