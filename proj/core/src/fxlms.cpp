#include "mvip/fxlms.hpp"

#include <algorithm>
#include <cmath>

#include "mvip/errors.hpp"

namespace mvip {

void FxLmsParams::validate() const {
  if (filter_length < 1) throw ConfigError("fxlms: filter_length must be >= 1");
  if (!(mu > 0.0)) throw ConfigError("fxlms: mu must be positive");
  if (!(lambda > 0.0) || lambda > 1.0) throw ConfigError("fxlms: lambda must lie in (0, 1]");
  if (!(p > 0.0)) throw ConfigError("fxlms: p must be positive");
  if (secondary_path.empty()) throw ConfigError("fxlms: secondary path needs at least one tap");
}

FxLmsChannel::FxLmsChannel(FxLmsParams params, FilterChain prefilter)
    : params_(std::move(params)), prefilter_(std::move(prefilter)) {
  params_.validate();
  reset();
}

void FxLmsChannel::reset() {
  const auto n = static_cast<std::size_t>(params_.filter_length);
  w_.assign(n, 0.0);
  x_.assign(n, 0.0);
  xs_.assign(params_.secondary_path.size(), 0.0);
  xf_.assign(n, 0.0);
  prefilter_.reset();
  faulted_ = false;
}

double FxLmsChannel::push_reference(double x) {
  x_.pop_back();
  x_.push_front(x);

  const double xp = prefilter_.empty() ? x : prefilter_.step(x);
  xs_.pop_back();
  xs_.push_front(xp);
  double filtered = 0.0;
  for (std::size_t k = 0; k < xs_.size(); ++k) filtered += params_.secondary_path[k] * xs_[k];
  xf_.pop_back();
  xf_.push_front(filtered);

  if (faulted_) return 0.0;
  double u = 0.0;
  for (std::size_t k = 0; k < w_.size(); ++k) u += w_[k] * x_[k];
  if (!std::isfinite(u)) {
    faulted_ = true;
    return 0.0;
  }
  return u;
}

void FxLmsChannel::adapt(double e) {
  if (faulted_) return;
  double power = 0.0;
  for (double v : xf_) power += v * v;
  if (params_.normalization == LmsNormalization::MeanPower) {
    power /= static_cast<double>(xf_.size());
  }
  const double gain = 2.0 * params_.mu * e / (power + params_.p);
  for (std::size_t k = 0; k < w_.size(); ++k) {
    w_[k] = params_.lambda * w_[k] + gain * xf_[k];
  }
  if (!std::all_of(w_.begin(), w_.end(), [](double v) { return std::isfinite(v); })) {
    faulted_ = true;
    std::fill(w_.begin(), w_.end(), 0.0);
  }
}

double FxLmsChannel::step(double x, double e) {
  const double u = push_reference(x);
  adapt(e);
  return u;
}

}  // namespace mvip
