#include "mvip/hafimc.hpp"

#include <cmath>

#include "mvip/errors.hpp"

namespace mvip {

FilterChain feedforward_band(double f_l, double f_h, double sample_rate) {
  if (!(f_l > 0.0) || !(f_h > f_l)) {
    throw ConfigError("hafimc: require 0 < f_l < f_h");
  }
  return FilterChain({butterworth_highpass(4, f_l, sample_rate),
                      butterworth_lowpass(2, f_h, sample_rate)});
}

HafimcController::HafimcController(const HafimcParams& params) : params_(params) {
  const double fs = params.imc.sample_rate;
  for (int i = 0; i < kChannelCount; ++i) {
    const auto k = static_cast<std::size_t>(i);
    imc_[k] = ImcChannel(params.imc);
    lms_[k] = FxLmsChannel(params.fxlms, feedforward_band(params.f_l, params.f_h, fs));
    ref_band_[k] = feedforward_band(params.f_l, params.f_h, fs);
    err_band_[k] = feedforward_band(params.f_l, params.f_h, fs);
  }
}

void HafimcController::reset() {
  for (auto& c : imc_) c.reset();
  for (auto& c : lms_) c.reset();
  for (auto& c : ref_band_) c.reset();
  for (auto& c : err_band_) c.reset();
  faulted_ = false;
}

HafimcOutput HafimcController::step(const HafimcSensors& sensors, const Vector6& r_desired) {
  HafimcOutput out;
  for (int i = 0; i < kChannelCount; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (params_.enable_imc) {
      out.imc[i] = imc_[k].step(r_desired[i], sensors.relative_pose[i]);
    }
    if (params_.enable_feedforward) {
      const double x = ref_band_[k].step(sensors.stator_accel[i]);
      const double e = err_band_[k].step(sensors.floater_accel[i]);
      out.feedforward[i] = lms_[k].step(x, e);
      if (lms_[k].faulted()) faulted_ = true;
    }
  }
  out.command = out.imc - out.feedforward;
  if (!out.command.allFinite()) faulted_ = true;
  if (faulted_) {
    out.command.setZero();
    out.fault = true;
  }
  return out;
}

}  // namespace mvip
