#pragma once

#include <complex>
#include <filesystem>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "mvip/scenario.hpp"

namespace mvip {

/// Complex amplitude of the `frequency` component of x (Hann-windowed
/// single-bin projection).
std::complex<double> tone_phasor(const Eigen::VectorXd& x, double rate, double frequency);

/// 20 log10 of floater to stator acceleration amplitude at a disturbance
/// tone, measured on the last `window_fraction` of the run along the
/// excitation axis. Throws ConfigError if the tone is not part of the run.
double attenuation_db(const ScenarioResult& result, double frequency, double window_fraction = 0.5);

/// 20 log10 |E / X_B| at a tone: relative position against base position.
double relative_transmissibility_db(const ScenarioResult& result, double frequency,
                                    double window_fraction = 0.5);

/// One-sided Welch PSD with a Hann window.
struct Psd {
  Eigen::VectorXd frequency;
  Eigen::VectorXd power;
};
Psd welch_psd(const Eigen::VectorXd& x, double rate, Eigen::Index segment, double overlap = 0.5);

enum class SpectrumKind { FloaterOverStator, RelativeOverStator };

struct SpectrumOptions {
  double f_min = 0.5;
  double f_max = 300.0;
  double overlap = 0.5;
  double segment_seconds = 0.0;  ///< 0: 2 / f_min
  SpectrumKind kind = SpectrumKind::FloaterOverStator;
};

struct Spectrum {
  Eigen::VectorXd frequency;
  Eigen::VectorXd db;
};

/// Averaged PSD ratio over [f_min, f_max]. Throws ConfigError if the run is
/// shorter than 10 / f_min.
Spectrum transmissibility_spectrum(const ScenarioResult& result, const SpectrumOptions& opts = {});

/// Least-squares slope of dB against log10 f on [f_lo, f_hi].
double slope_db_per_decade(const Eigen::VectorXd& frequency, const Eigen::VectorXd& db,
                           double f_lo, double f_hi);

double rms(const Eigen::VectorXd& x);

/// max over steps and off-channels of |pose_i - ideal_i| in the window after
/// each step, divided by the step size. Zero when there are no steps.
double cross_coupling(const ScenarioResult& result);

/// First time after which the per-window attenuation stays within 3 dB of
/// the final window.
double convergence_time(const ScenarioResult& result, double frequency, double window = 0.5);

/// Tone attenuations, RMS levels, cross-coupling and status.
nlohmann::json metrics_json(const ScenarioResult& result);

/// Wide CSV: time, then stator_accel, floater_accel, pose, reference, ideal,
/// command, feedforward (six columns each), forces f1..f8.
void write_result_csv(const ScenarioResult& result, const std::filesystem::path& path);
/// Reads the series back. Tones, steps and axis are taken from `meta`.
ScenarioResult read_result_csv(const std::filesystem::path& path, const ScenarioResult& meta);

}  // namespace mvip
