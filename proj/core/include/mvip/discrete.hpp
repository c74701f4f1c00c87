#pragma once

#include <complex>
#include <string>
#include <vector>

namespace mvip {

using Complex = std::complex<double>;

/// Continuous-time transfer function in zero-pole-gain form:
/// H(s) = gain * prod(s - z_i) / prod(s - p_i).
struct Zpk {
  std::vector<Complex> zeros;
  std::vector<Complex> poles;
  double gain = 1.0;

  Complex evaluate(Complex s) const;
  bool proper() const { return zeros.size() <= poles.size(); }
  int relative_degree() const {
    return static_cast<int>(poles.size()) - static_cast<int>(zeros.size());
  }

  Zpk inverse() const;
  /// Removes zero/pole pairs closer than `tol` (relative to their scale).
  Zpk cancelled(double tol = 1e-7) const;
};

Zpk operator*(const Zpk& a, const Zpk& b);
/// 1 - H, computed through polynomial expansion and root finding.
Zpk one_minus(const Zpk& h);

/// Real polynomial coefficients (highest power first) from roots.
std::vector<double> poly_from_roots(const std::vector<Complex>& roots);
std::vector<Complex> roots_of(const std::vector<double>& coeffs_high_first);

/// Direct-form II transposed IIR filter, a[0] normalized to 1.
class DiscreteFilter {
 public:
  DiscreteFilter() : b_{1.0}, a_{1.0} {}
  DiscreteFilter(std::vector<double> b, std::vector<double> a);

  double step(double x);
  void reset();
  Complex response(double omega_T) const;  ///< H(e^{j omega T})
  bool stable() const;

  const std::vector<double>& b() const { return b_; }
  const std::vector<double>& a() const { return a_; }

 private:
  std::vector<double> b_;
  std::vector<double> a_;
  std::vector<double> state_;
};

/// Tustin (bilinear) discretization without prewarping. Throws ConfigError
/// naming `block` if the transfer function is improper.
DiscreteFilter bilinear(const Zpk& h, double sample_rate, const std::string& block = "filter");

/// Butterworth prototypes at corner `fc` Hz, discretized with prewarping.
DiscreteFilter butterworth_lowpass(int order, double fc, double sample_rate);
DiscreteFilter butterworth_highpass(int order, double fc, double sample_rate);

/// Series connection of discrete filters.
class FilterChain {
 public:
  FilterChain() = default;
  explicit FilterChain(std::vector<DiscreteFilter> stages) : stages_(std::move(stages)) {}

  double step(double x) {
    for (auto& s : stages_) x = s.step(x);
    return x;
  }
  void reset() {
    for (auto& s : stages_) s.reset();
  }
  Complex response(double omega_T) const {
    Complex r{1.0, 0.0};
    for (const auto& s : stages_) r *= s.response(omega_T);
    return r;
  }
  bool empty() const { return stages_.empty(); }

 private:
  std::vector<DiscreteFilter> stages_;
};

}  // namespace mvip
