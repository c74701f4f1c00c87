#include "mvip/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "mvip/errors.hpp"

namespace mvip {
namespace {

Eigen::VectorXd hann(Eigen::Index n) {
  Eigen::VectorXd w(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    w[k] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                static_cast<double>(n));
  }
  return w;
}

Eigen::Index window_start(const ScenarioResult& r, double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0) throw ConfigError("metrics: window fraction must lie in (0, 1]");
  if (r.size() < 8) throw ConfigError("metrics: run too short");
  return r.size() - static_cast<Eigen::Index>(std::floor(fraction * static_cast<double>(r.size())));
}

void require_tone(const ScenarioResult& r, double frequency) {
  for (const auto& t : r.tones) {
    if (std::abs(t.frequency - frequency) <= 1e-9 * std::max(1.0, frequency)) return;
  }
  throw ConfigError("metrics: no disturbance tone at " + std::to_string(frequency) + " Hz");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* const kBlocks[] = {"stator_accel", "floater_accel", "pose", "reference", "ideal",
                               "command", "feedforward"};
constexpr int kBlockCount = 7;
constexpr std::size_t kResultColumns = 1 + 6 * kBlockCount + 8;

}  // namespace

std::complex<double> tone_phasor(const Eigen::VectorXd& x, double rate, double frequency) {
  const Eigen::Index n = x.size();
  if (n == 0) throw ConfigError("tone_phasor: empty series");
  const Eigen::VectorXd w = hann(n);
  std::complex<double> acc{0.0, 0.0};
  const double omega = 2.0 * std::numbers::pi * frequency / rate;
  for (Eigen::Index k = 0; k < n; ++k) {
    acc += w[k] * x[k] * std::polar(1.0, -omega * static_cast<double>(k));
  }
  return 2.0 * acc / w.sum();
}

double attenuation_db(const ScenarioResult& result, double frequency, double window_fraction) {
  require_tone(result, frequency);
  const Eigen::Index s = window_start(result, window_fraction);
  const Eigen::Index n = result.size() - s;
  const auto fl = tone_phasor(result.floater_accel.col(result.axis).segment(s, n),
                              result.sample_rate, frequency);
  const auto st = tone_phasor(result.stator_accel.col(result.axis).segment(s, n),
                              result.sample_rate, frequency);
  return 20.0 * std::log10(std::abs(fl) / std::abs(st));
}

double relative_transmissibility_db(const ScenarioResult& result, double frequency,
                                    double window_fraction) {
  require_tone(result, frequency);
  const Eigen::Index s = window_start(result, window_fraction);
  const Eigen::Index n = result.size() - s;
  const auto rel = tone_phasor(result.relative_pose.col(result.axis).segment(s, n),
                               result.sample_rate, frequency);
  const auto st = tone_phasor(result.stator_accel.col(result.axis).segment(s, n),
                              result.sample_rate, frequency);
  const double w = 2.0 * std::numbers::pi * frequency;
  return 20.0 * std::log10(std::abs(rel) * w * w / std::abs(st));
}

Psd welch_psd(const Eigen::VectorXd& x, double rate, Eigen::Index segment, double overlap) {
  if (segment < 8 || segment > x.size()) throw ConfigError("welch: invalid segment length");
  if (!(overlap >= 0.0) || !(overlap < 1.0)) throw ConfigError("welch: overlap must lie in [0, 1)");
  const auto hop = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(std::llround(static_cast<double>(segment) * (1.0 - overlap))));
  const Eigen::VectorXd w = hann(segment);
  const double scale = 1.0 / (rate * w.squaredNorm());
  const Eigen::Index bins = segment / 2 + 1;
  Psd psd;
  psd.frequency.resize(bins);
  for (Eigen::Index k = 0; k < bins; ++k) {
    psd.frequency[k] = rate * static_cast<double>(k) / static_cast<double>(segment);
  }
  psd.power = Eigen::VectorXd::Zero(bins);

  Eigen::FFT<double> fft;
  std::vector<double> buf(static_cast<std::size_t>(segment));
  std::vector<std::complex<double>> spec;
  int count = 0;
  for (Eigen::Index start = 0; start + segment <= x.size(); start += hop) {
    const double mean = x.segment(start, segment).mean();
    for (Eigen::Index k = 0; k < segment; ++k) {
      buf[static_cast<std::size_t>(k)] = (x[start + k] - mean) * w[k];
    }
    fft.fwd(spec, buf);
    for (Eigen::Index k = 0; k < bins; ++k) {
      double p = std::norm(spec[static_cast<std::size_t>(k)]) * scale;
      if (k != 0 && !(segment % 2 == 0 && k == bins - 1)) p *= 2.0;
      psd.power[k] += p;
    }
    ++count;
  }
  psd.power /= static_cast<double>(count);
  return psd;
}

Spectrum transmissibility_spectrum(const ScenarioResult& result, const SpectrumOptions& opts) {
  if (!(opts.f_min > 0.0) || !(opts.f_max > opts.f_min)) {
    throw ConfigError("spectrum: require 0 < f_min < f_max");
  }
  const double duration = static_cast<double>(result.size()) / result.sample_rate;
  if (duration < 10.0 / opts.f_min) {
    throw ConfigError("spectrum: run of " + std::to_string(duration) + " s is shorter than 10 / f_min");
  }
  const double seg_s = opts.segment_seconds > 0.0 ? opts.segment_seconds : 2.0 / opts.f_min;
  const auto segment = static_cast<Eigen::Index>(std::llround(seg_s * result.sample_rate));
  const int axis = result.axis;
  const Psd stator = welch_psd(result.stator_accel.col(axis), result.sample_rate, segment, opts.overlap);
  const Eigen::VectorXd num_series = opts.kind == SpectrumKind::FloaterOverStator
                                         ? Eigen::VectorXd(result.floater_accel.col(axis))
                                         : Eigen::VectorXd(result.relative_pose.col(axis));
  const Psd num = welch_psd(num_series, result.sample_rate, segment, opts.overlap);

  std::vector<double> f;
  std::vector<double> db;
  for (Eigen::Index k = 0; k < stator.frequency.size(); ++k) {
    const double fk = stator.frequency[k];
    if (fk < opts.f_min || fk > opts.f_max) continue;
    double ratio = num.power[k] / stator.power[k];
    if (opts.kind == SpectrumKind::RelativeOverStator) {
      const double w = 2.0 * std::numbers::pi * fk;
      ratio *= w * w * w * w;
    }
    f.push_back(fk);
    db.push_back(10.0 * std::log10(ratio));
  }
  Spectrum s;
  s.frequency = Eigen::Map<Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
  s.db = Eigen::Map<Eigen::VectorXd>(db.data(), static_cast<Eigen::Index>(db.size()));
  return s;
}

double slope_db_per_decade(const Eigen::VectorXd& frequency, const Eigen::VectorXd& db, double f_lo,
                           double f_hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (Eigen::Index k = 0; k < frequency.size(); ++k) {
    if (frequency[k] < f_lo || frequency[k] > f_hi) continue;
    const double x = std::log10(frequency[k]);
    sx += x;
    sy += db[k];
    sxx += x * x;
    sxy += x * db[k];
    ++n;
  }
  if (n < 2) throw ConfigError("slope fit: fewer than two points in range");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double rms(const Eigen::VectorXd& x) {
  if (x.size() == 0) return 0.0;
  return std::sqrt(x.squaredNorm() / static_cast<double>(x.size()));
}

double cross_coupling(const ScenarioResult& result) {
  double worst = 0.0;
  for (std::size_t s = 0; s < result.steps.size(); ++s) {
    const auto& step = result.steps[s];
    if (step.size == 0.0) continue;
    double end = std::numeric_limits<double>::infinity();
    for (const auto& other : result.steps) {
      if (other.time > step.time) end = std::min(end, other.time);
    }
    for (Eigen::Index k = 0; k < result.size(); ++k) {
      const double t = result.time[k];
      if (t < step.time || t >= end) continue;
      for (int i = 0; i < 6; ++i) {
        if (i == step.channel) continue;
        const double dev = std::abs(result.relative_pose(k, i) - result.ideal(k, i));
        worst = std::max(worst, dev / std::abs(step.size));
      }
    }
  }
  return worst;
}

double convergence_time(const ScenarioResult& result, double frequency, double window) {
  require_tone(result, frequency);
  const auto len = static_cast<Eigen::Index>(std::llround(window * result.sample_rate));
  if (len < 8 || len > result.size()) throw ConfigError("convergence_time: invalid window");
  std::vector<double> att;
  std::vector<double> start_time;
  for (Eigen::Index s = 0; s + len <= result.size(); s += len) {
    const auto fl = tone_phasor(result.floater_accel.col(result.axis).segment(s, len),
                                result.sample_rate, frequency);
    const auto st = tone_phasor(result.stator_accel.col(result.axis).segment(s, len),
                                result.sample_rate, frequency);
    att.push_back(20.0 * std::log10(std::abs(fl) / std::abs(st)));
    start_time.push_back(result.time[s]);
  }
  const double final_db = att.back();
  std::size_t first = att.size() - 1;
  while (first > 0 && std::abs(att[first - 1] - final_db) <= 3.0) --first;
  return start_time[first];
}

nlohmann::json metrics_json(const ScenarioResult& result) {
  nlohmann::json j;
  j["hash"] = result.hash;
  j["status"] = to_string(result.status);
  j["message"] = result.message;
  j["samples"] = result.size();
  j["sample_rate"] = result.sample_rate;
  j["axis"] = result.axis;
  auto tones = nlohmann::json::array();
  if (result.status == RunStatus::Ok && result.size() >= 8) {
    for (const auto& t : result.tones) {
      tones.push_back({{"frequency", t.frequency},
                       {"attenuation_db", attenuation_db(result, t.frequency)},
                       {"convergence_time", convergence_time(result, t.frequency)}});
    }
  }
  j["tones"] = tones;
  j["stator_accel_rms"] = rms(result.stator_accel.col(result.axis));
  j["floater_accel_rms"] = rms(result.floater_accel.col(result.axis));
  j["cross_coupling"] = cross_coupling(result);
  return j;
}

void write_result_csv(const ScenarioResult& result, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write result file " + path.string());
  out << "time";
  for (const char* b : kBlocks) {
    for (int i = 0; i < 6; ++i) out << ',' << b << '_' << i;
  }
  for (int i = 1; i <= 8; ++i) out << ",f" << i;
  out << '\n';
  const Eigen::MatrixXd* blocks[] = {&result.stator_accel, &result.floater_accel,
                                     &result.relative_pose, &result.reference,
                                     &result.ideal,        &result.command,
                                     &result.feedforward};
  for (Eigen::Index k = 0; k < result.size(); ++k) {
    out << fmt(result.time[k]);
    for (const auto* m : blocks) {
      for (int i = 0; i < 6; ++i) out << ',' << fmt((*m)(k, i));
    }
    for (int i = 0; i < 8; ++i) out << ',' << fmt(result.forces(k, i));
    out << '\n';
  }
}

ScenarioResult read_result_csv(const std::filesystem::path& path, const ScenarioResult& meta) {
  if (!std::filesystem::exists(path)) {
    throw MissingArtifactError("result file not found: " + path.string());
  }
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::istringstream is(line);
    std::string cell;
    while (std::getline(is, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != kResultColumns) {
      throw ConfigError("result csv: expected " + std::to_string(kResultColumns) + " columns");
    }
    rows.push_back(std::move(v));
  }
  ScenarioResult r = meta;
  const auto n = static_cast<Eigen::Index>(rows.size());
  r.time.resize(n);
  Eigen::MatrixXd* blocks[] = {&r.stator_accel, &r.floater_accel, &r.relative_pose,
                               &r.reference,    &r.ideal,         &r.command,
                               &r.feedforward};
  for (auto* m : blocks) m->resize(n, 6);
  r.forces.resize(n, 8);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& v = rows[static_cast<std::size_t>(k)];
    r.time[k] = v[0];
    for (int b = 0; b < kBlockCount; ++b) {
      for (int i = 0; i < 6; ++i) (*blocks[b])(k, i) = v[static_cast<std::size_t>(1 + 6 * b + i)];
    }
    for (int i = 0; i < 8; ++i) {
      r.forces(k, i) = v[static_cast<std::size_t>(1 + 6 * kBlockCount + i)];
    }
  }
  return r;
}

}  // namespace mvip
