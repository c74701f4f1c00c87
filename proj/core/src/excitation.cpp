#include "mvip/excitation.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "mvip/discrete.hpp"
#include "mvip/errors.hpp"

namespace mvip {

std::string to_string(ExcitationKind kind) {
  return kind == ExcitationKind::RGS ? "rgs" : "sine_sweep";
}

ExcitationKind excitation_from_string(const std::string& name) {
  if (name == "rgs") return ExcitationKind::RGS;
  if (name == "sine_sweep") return ExcitationKind::SineSweep;
  throw ConfigError("unknown excitation kind '" + name + "' (expected rgs or sine_sweep)");
}

double sweep_frequency(double f_l, double f_h, double duration, double t) {
  return f_l * std::exp(t * std::log(f_h / f_l) / duration);
}

Eigen::MatrixXd generate_excitation(const ExcitationParams& params, double duration) {
  if (!(duration > 0.0)) throw ConfigError("excitation: duration must be positive");
  if (!(params.sample_rate > 0.0)) throw ConfigError("excitation: sample rate must be positive");
  if (!(params.f_l > 0.0) || !(params.f_h > params.f_l) ||
      !(params.f_h < 0.5 * params.sample_rate)) {
    throw ConfigError("excitation: require 0 < f_l < f_h < Nyquist");
  }
  if (!(params.limit.array() > 0.0).all()) throw ConfigError("excitation: limits must be positive");
  const auto n = static_cast<Eigen::Index>(std::llround(duration * params.sample_rate));
  Eigen::MatrixXd out(n, kChannelCount);
  const double dt = 1.0 / params.sample_rate;

  if (params.kind == ExcitationKind::RGS) {
    std::mt19937_64 rng(params.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int c = 0; c < kChannelCount; ++c) {
      DiscreteFilter lp = butterworth_lowpass(2, params.f_h, params.sample_rate);
      for (Eigen::Index k = 0; k < n; ++k) out(k, c) = lp.step(normal(rng));
      const double rms = std::sqrt(out.col(c).squaredNorm() / static_cast<double>(n));
      if (rms > 0.0) out.col(c) *= params.amplitude[c] / rms;
      out.col(c) = out.col(c).cwiseMax(-params.limit[c]).cwiseMin(params.limit[c]);
    }
    return out;
  }

  const double rate = std::log(params.f_h / params.f_l) / duration;
  for (int c = 0; c < kChannelCount; ++c) {
    const double offset = 2.0 * std::numbers::pi * c / kChannelCount;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) * dt;
      const double phase = 2.0 * std::numbers::pi * params.f_l / rate * (std::exp(rate * t) - 1.0);
      out(k, c) = std::numbers::sqrt2 * params.amplitude[c] * std::sin(phase + offset);
    }
    out.col(c) = out.col(c).cwiseMax(-params.limit[c]).cwiseMin(params.limit[c]);
  }
  return out;
}

double autocorrelation(const Eigen::VectorXd& x, Eigen::Index lag) {
  if (lag < 0 || lag >= x.size()) throw ConfigError("autocorrelation: lag out of range");
  const Eigen::VectorXd c = x.array() - x.mean();
  const double r0 = c.squaredNorm();
  if (r0 == 0.0) return 0.0;
  const Eigen::Index n = x.size() - lag;
  return c.head(n).dot(c.tail(n)) / r0;
}

}  // namespace mvip
