#pragma once

#include "mvip/discrete.hpp"

namespace mvip {

struct ImcParams {
  double eps1 = 31.4;   ///< rad/s, tracking filter corner
  double eps2 = 69.08;  ///< rad/s, position-keeping filter corner
  double sample_rate = 2000.0;
};

/// Continuous-time blocks of the 2-DoF design for the nominal model 1/s^2.
struct ImcDesign {
  Zpk plant;  ///< G = 1/s^2
  Zpk q1;     ///< eps1^2 / (s + eps1)^2
  Zpk q2;     ///< eps2^2 / (s + eps2)^2
  Zpk gs;     ///< C2^-1 C1 with Ck = Qk / G
  Zpk gt;     ///< C2 / (1 - G C2)
};

/// Composes the blocks. Throws ConfigError naming the block if a
/// composition is improper or the parameters are invalid.
ImcDesign compose_imc(double eps1, double eps2);

/// One decoupled channel: V = G_T (G_s r_d - r), discretized by Tustin.
class ImcChannel {
 public:
  ImcChannel() : ImcChannel(ImcParams{}) {}
  explicit ImcChannel(const ImcParams& params);

  /// Acceleration command for desired and measured relative position.
  double step(double r_desired, double r_measured);
  void reset();

  const ImcParams& params() const { return params_; }
  const ImcDesign& design() const { return design_; }
  const DiscreteFilter& gs_filter() const { return gs_; }
  const DiscreteFilter& gt_filter() const { return gt_; }

 private:
  ImcParams params_;
  ImcDesign design_;
  DiscreteFilter gs_;
  DiscreteFilter gt_;
};

/// Requires eps1, eps2 > 0 and sample_rate >= 10 eps2 / 2pi.
ImcChannel design_imc(double eps1, double eps2, double sample_rate);

/// |(j omega / eps2 + 1)^2 - 1|
double stability_function(double omega, double eps2);

struct StabilityReport {
  double at_eps2 = 0.0;        ///< value of the bound at omega = eps2
  double minimum = 0.0;        ///< minimum over the grid
  double worst_omega = 0.0;    ///< rad/s, where the minimum occurs
  bool satisfied = false;      ///< minimum > l_bar
};

/// Scans a log grid of `points` frequencies in [omega_lo, omega_hi] rad/s.
StabilityReport stability_margin(const ImcChannel& ch, double l_bar, double omega_lo = 1e-3,
                                 double omega_hi = 1e4, int points = 2001);

}  // namespace mvip
