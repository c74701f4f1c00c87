#include "mvip/imc.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mvip/errors.hpp"

namespace mvip {
namespace {

Zpk second_order_lowpass(double eps) {
  return Zpk{{}, {Complex{-eps, 0.0}, Complex{-eps, 0.0}}, eps * eps};
}

Zpk checked(const Zpk& h, const std::string& name) {
  if (!h.proper()) {
    throw ConfigError("imc design: block '" + name + "' is improper (" +
                      std::to_string(h.zeros.size()) + " zeros, " +
                      std::to_string(h.poles.size()) + " poles)");
  }
  return h;
}

}  // namespace

ImcDesign compose_imc(double eps1, double eps2) {
  if (!(eps1 > 0.0) || !(eps2 > 0.0) || !std::isfinite(eps1) || !std::isfinite(eps2)) {
    throw ConfigError("imc design: eps1 and eps2 must be positive");
  }
  ImcDesign d;
  d.plant = Zpk{{}, {Complex{0.0, 0.0}, Complex{0.0, 0.0}}, 1.0};
  d.q1 = second_order_lowpass(eps1);
  d.q2 = second_order_lowpass(eps2);
  const Zpk c1 = d.q1 * d.plant.inverse();
  const Zpk c2 = d.q2 * d.plant.inverse();
  d.gs = checked(c2.inverse() * c1, "G_s");
  d.gt = checked(c2 * one_minus(d.plant * c2).inverse(), "G_T");
  return d;
}

ImcChannel::ImcChannel(const ImcParams& params) : params_(params) {
  if (!(params.sample_rate >= 10.0 * params.eps2 / (2.0 * std::numbers::pi))) {
    throw ConfigError("imc design: sample rate must be at least 10 eps2 / 2pi");
  }
  design_ = compose_imc(params.eps1, params.eps2);
  gs_ = bilinear(design_.gs, params.sample_rate, "G_s");
  gt_ = bilinear(design_.gt, params.sample_rate, "G_T");
  if (!gs_.stable()) throw ConfigError("imc design: discrete G_s is unstable");
  if (!gt_.stable()) throw ConfigError("imc design: discrete G_T is unstable");
}

double ImcChannel::step(double r_desired, double r_measured) {
  const double shaped = gs_.step(r_desired);
  return gt_.step(shaped - r_measured);
}

void ImcChannel::reset() {
  gs_.reset();
  gt_.reset();
}

ImcChannel design_imc(double eps1, double eps2, double sample_rate) {
  return ImcChannel(ImcParams{eps1, eps2, sample_rate});
}

double stability_function(double omega, double eps2) {
  const Complex s{0.0, omega / eps2};
  return std::abs((s + 1.0) * (s + 1.0) - 1.0);
}

StabilityReport stability_margin(const ImcChannel& ch, double l_bar, double omega_lo,
                                 double omega_hi, int points) {
  if (!(l_bar >= 0.0)) throw ConfigError("stability margin: l_bar must be non-negative");
  if (!(omega_lo > 0.0) || !(omega_hi > omega_lo) || points < 2) {
    throw ConfigError("stability margin: invalid frequency grid");
  }
  const double eps2 = ch.params().eps2;
  StabilityReport r;
  r.at_eps2 = stability_function(eps2, eps2);
  r.minimum = std::numeric_limits<double>::infinity();
  const double step = std::log(omega_hi / omega_lo) / (points - 1);
  for (int i = 0; i < points; ++i) {
    const double w = omega_lo * std::exp(step * i);
    const double v = stability_function(w, eps2);
    if (v < r.minimum) {
      r.minimum = v;
      r.worst_omega = w;
    }
  }
  r.satisfied = r.minimum > l_bar;
  return r;
}

}  // namespace mvip
