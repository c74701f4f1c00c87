#pragma once

#include <array>

#include "mvip/fxlms.hpp"
#include "mvip/imc.hpp"
#include "mvip/types.hpp"

namespace mvip {

struct HafimcParams {
  ImcParams imc;
  FxLmsParams fxlms;
  double f_l = 10.0;   ///< Hz, lower edge of the feedforward band
  double f_h = 300.0;  ///< Hz, upper edge of the feedforward band
  bool enable_imc = true;
  bool enable_feedforward = true;
};

struct HafimcSensors {
  Vector6 stator_accel = Vector6::Zero();
  Vector6 floater_accel = Vector6::Zero();
  Vector6 relative_pose = Vector6::Zero();
};

struct HafimcOutput {
  Vector6 command = Vector6::Zero();      ///< per-channel acceleration, pre-inversion
  Vector6 imc = Vector6::Zero();
  Vector6 feedforward = Vector6::Zero();  ///< subtracted from the IMC part
  bool fault = false;
};

/// Six IMC channels plus six Fx-LMS channels. Reference and error signals
/// of the adaptive part are band-limited to [f_l, f_h].
class HafimcController {
 public:
  HafimcController() : HafimcController(HafimcParams{}) {}
  explicit HafimcController(const HafimcParams& params);

  HafimcOutput step(const HafimcSensors& sensors, const Vector6& r_desired = Vector6::Zero());
  void reset();

  bool faulted() const { return faulted_; }
  const HafimcParams& params() const { return params_; }
  const FxLmsChannel& fxlms(int i) const { return lms_[static_cast<std::size_t>(i)]; }

 private:
  HafimcParams params_;
  std::array<ImcChannel, kChannelCount> imc_;
  std::array<FxLmsChannel, kChannelCount> lms_;
  std::array<FilterChain, kChannelCount> ref_band_;
  std::array<FilterChain, kChannelCount> err_band_;
  bool faulted_ = false;
};

/// 4th-order Butterworth high-pass at f_l followed by a 2nd-order low-pass at f_h.
FilterChain feedforward_band(double f_l, double f_h, double sample_rate);

}  // namespace mvip
