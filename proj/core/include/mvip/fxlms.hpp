#pragma once

#include <deque>
#include <vector>

#include "mvip/discrete.hpp"

namespace mvip {

/// Normalization of the weight update step.
enum class LmsNormalization {
  MeanPower,     ///< ||X'||^2 / N + p
  SumOfSquares,  ///< ||X'||^2 + p
};

struct FxLmsParams {
  int filter_length = 65;
  double mu = 0.004;
  double lambda = 0.998;
  double p = 0.001;
  std::vector<double> secondary_path{0.0, 1.0};  ///< FIR taps of the path estimate
  LmsNormalization normalization = LmsNormalization::MeanPower;

  void validate() const;  ///< throws ConfigError
};

/// Filtered-reference LMS adaptive FIR channel.
class FxLmsChannel {
 public:
  FxLmsChannel() : FxLmsChannel(FxLmsParams{}) {}
  explicit FxLmsChannel(FxLmsParams params, FilterChain prefilter = {});

  /// Shifts x into the reference history and returns U = W' X.
  double push_reference(double x);
  /// Weight update with the error sample that belongs to the last output.
  void adapt(double e);
  /// push_reference followed by adapt.
  double step(double x, double e);

  void reset();

  const std::vector<double>& weights() const { return w_; }
  bool faulted() const { return faulted_; }
  const FxLmsParams& params() const { return params_; }

 private:
  FxLmsParams params_;
  FilterChain prefilter_;
  std::vector<double> w_;
  std::deque<double> x_;        ///< reference history, newest first
  std::deque<double> xs_;       ///< prefiltered reference, newest first (for H-hat)
  std::deque<double> xf_;       ///< filtered reference X', newest first
  bool faulted_ = false;
};

}  // namespace mvip
