#include "mvip/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Core>
#include <unsupported/Eigen/Polynomials>

#include "mvip/errors.hpp"

namespace mvip {

Complex Zpk::evaluate(Complex s) const {
  Complex num{gain, 0.0};
  Complex den{1.0, 0.0};
  for (const auto& z : zeros) num *= (s - z);
  for (const auto& p : poles) den *= (s - p);
  return num / den;
}

Zpk Zpk::inverse() const {
  if (gain == 0.0) {
    throw ConfigError("cannot invert a zero transfer function");
  }
  return Zpk{poles, zeros, 1.0 / gain};
}

Zpk Zpk::cancelled(double tol) const {
  Zpk out{{}, poles, gain};
  for (const auto& z : zeros) {
    auto it = std::find_if(out.poles.begin(), out.poles.end(), [&](const Complex& p) {
      const double scale = std::max({1.0, std::abs(z), std::abs(p)});
      return std::abs(z - p) <= tol * scale;
    });
    if (it != out.poles.end()) {
      out.poles.erase(it);
    } else {
      out.zeros.push_back(z);
    }
  }
  return out;
}

Zpk operator*(const Zpk& a, const Zpk& b) {
  Zpk out;
  out.zeros = a.zeros;
  out.zeros.insert(out.zeros.end(), b.zeros.begin(), b.zeros.end());
  out.poles = a.poles;
  out.poles.insert(out.poles.end(), b.poles.begin(), b.poles.end());
  out.gain = a.gain * b.gain;
  return out.cancelled();
}

std::vector<double> poly_from_roots(const std::vector<Complex>& roots) {
  std::vector<Complex> c{Complex{1.0, 0.0}};
  for (const auto& r : roots) {
    std::vector<Complex> next(c.size() + 1, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= c[i] * r;
    }
    c = std::move(next);
  }
  std::vector<double> out(c.size());
  std::transform(c.begin(), c.end(), out.begin(), [](const Complex& v) { return v.real(); });
  return out;
}

std::vector<Complex> roots_of(const std::vector<double>& coeffs_high_first) {
  std::vector<double> c = coeffs_high_first;
  while (!c.empty() && c.front() == 0.0) c.erase(c.begin());
  std::vector<Complex> roots;
  // Exact zero roots first: the companion solver returns them only approximately.
  while (c.size() > 1 && c.back() == 0.0) {
    c.pop_back();
    roots.emplace_back(0.0, 0.0);
  }
  const int degree = static_cast<int>(c.size()) - 1;
  if (degree <= 0) return roots;
  if (degree == 1) {
    roots.emplace_back(-c[1] / c[0], 0.0);
    return roots;
  }
  Eigen::VectorXd low_first(degree + 1);
  for (int i = 0; i <= degree; ++i) low_first[i] = c[degree - i];
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(low_first);
  for (Eigen::Index i = 0; i < solver.roots().size(); ++i) roots.push_back(solver.roots()[i]);
  return roots;
}

Zpk one_minus(const Zpk& h) {
  if (!h.proper()) {
    throw ConfigError("one_minus: improper transfer function");
  }
  const std::vector<double> den = poly_from_roots(h.poles);
  std::vector<double> num = poly_from_roots(h.zeros);
  // Align num to den length (highest power first).
  num.insert(num.begin(), den.size() - num.size(), 0.0);
  std::vector<double> diff(den.size());
  for (std::size_t i = 0; i < den.size(); ++i) diff[i] = den[i] - h.gain * num[i];

  // Leading coefficient of diff sets the gain.
  std::size_t lead = 0;
  while (lead < diff.size() && std::abs(diff[lead]) < 1e-300) ++lead;
  if (lead == diff.size()) return Zpk{{}, {}, 0.0};
  // Snap tiny cancellation residue in the constant term to an exact zero.
  const double scale = std::abs(den.back()) + std::abs(h.gain * num.back());
  if (std::abs(diff.back()) <= 1e-12 * scale) diff.back() = 0.0;

  Zpk out;
  out.gain = diff[lead];
  out.zeros = roots_of(std::vector<double>(diff.begin() + static_cast<long>(lead), diff.end()));
  out.poles = h.poles;
  return out.cancelled();
}

DiscreteFilter::DiscreteFilter(std::vector<double> b, std::vector<double> a)
    : b_(std::move(b)), a_(std::move(a)) {
  if (a_.empty() || a_.front() == 0.0) {
    throw ConfigError("discrete filter: leading denominator coefficient must be nonzero");
  }
  const std::size_t n = std::max(a_.size(), b_.size());
  b_.resize(n, 0.0);
  a_.resize(n, 0.0);
  const double a0 = a_.front();
  for (auto& v : b_) v /= a0;
  for (auto& v : a_) v /= a0;
  state_.assign(n, 0.0);
}

double DiscreteFilter::step(double x) {
  const std::size_t n = a_.size();
  const double y = b_[0] * x + state_[0];
  for (std::size_t i = 1; i < n; ++i) {
    state_[i - 1] = b_[i] * x - a_[i] * y + (i < n - 1 ? state_[i] : 0.0);
  }
  return y;
}

void DiscreteFilter::reset() { std::fill(state_.begin(), state_.end(), 0.0); }

Complex DiscreteFilter::response(double omega_T) const {
  Complex num{0.0, 0.0};
  Complex den{0.0, 0.0};
  for (std::size_t k = 0; k < b_.size(); ++k) {
    const Complex zk = std::polar(1.0, -omega_T * static_cast<double>(k));
    num += b_[k] * zk;
    den += a_[k] * zk;
  }
  return num / den;
}

bool DiscreteFilter::stable() const {
  for (const auto& r : roots_of(a_)) {
    if (std::abs(r) >= 1.0) return false;
  }
  return true;
}

DiscreteFilter bilinear(const Zpk& h, double sample_rate, const std::string& block) {
  if (!h.proper()) {
    throw ConfigError("discretization of '" + block + "' failed: improper transfer function (" +
                      std::to_string(h.zeros.size()) + " zeros, " +
                      std::to_string(h.poles.size()) + " poles)");
  }
  const double k2 = 2.0 * sample_rate;
  std::vector<Complex> zd;
  std::vector<Complex> pd;
  Complex gain{h.gain, 0.0};
  for (const auto& z : h.zeros) {
    zd.push_back((k2 + z) / (k2 - z));
    gain *= (k2 - z);
  }
  for (const auto& p : h.poles) {
    pd.push_back((k2 + p) / (k2 - p));
    gain /= (k2 - p);
  }
  while (zd.size() < pd.size()) zd.emplace_back(-1.0, 0.0);

  std::vector<double> b = poly_from_roots(zd);
  for (auto& v : b) v *= gain.real();
  return DiscreteFilter(std::move(b), poly_from_roots(pd));
}

namespace {

std::vector<Complex> butterworth_poles(int order, double wc) {
  std::vector<Complex> p;
  for (int k = 0; k < order; ++k) {
    const double angle = std::numbers::pi * (2.0 * k + order + 1) / (2.0 * order);
    p.push_back(wc * std::polar(1.0, angle));
  }
  return p;
}

double prewarp(double fc, double sample_rate) {
  if (!(fc > 0.0) || !(fc < 0.5 * sample_rate)) {
    throw ConfigError("butterworth corner must lie in (0, Nyquist)");
  }
  return 2.0 * sample_rate * std::tan(std::numbers::pi * fc / sample_rate);
}

}  // namespace

DiscreteFilter butterworth_lowpass(int order, double fc, double sample_rate) {
  const double wc = prewarp(fc, sample_rate);
  return bilinear(Zpk{{}, butterworth_poles(order, wc), std::pow(wc, order)}, sample_rate,
                  "butterworth lowpass");
}

DiscreteFilter butterworth_highpass(int order, double fc, double sample_rate) {
  const double wc = prewarp(fc, sample_rate);
  return bilinear(Zpk{std::vector<Complex>(order, Complex{0.0, 0.0}),
                      butterworth_poles(order, wc), 1.0},
                  sample_rate, "butterworth highpass");
}

}  // namespace mvip
