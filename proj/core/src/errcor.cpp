#include "mvip/errcor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "mvip/errors.hpp"

namespace mvip {
namespace {

constexpr Eigen::Index kChunk = 4096;

Eigen::MatrixXd squared_distances(const RbfNetwork& net, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd d2(x.rows(), net.neurons());
  for (Eigen::Index i = 0; i < net.neurons(); ++i) {
    d2.col(i) = (x.rowwise() - net.centers.row(i)).rowwise().squaredNorm();
  }
  return d2;
}

Eigen::MatrixXd kernels(const RbfNetwork& net, const Eigen::MatrixXd& d2) {
  Eigen::MatrixXd phi(d2.rows(), d2.cols());
  for (Eigen::Index i = 0; i < d2.cols(); ++i) {
    phi.col(i) = (-d2.col(i).array() / (2.0 * net.radii[i] * net.radii[i])).exp();
  }
  return phi;
}

double sum_squared_error(const RbfNetwork& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& t) {
  return (t - net.forward_normalized_rows(x)).squaredNorm();
}

}  // namespace

void TrainingConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("training: max_iterations must be >= 1");
  if (!(desired_rmse > 0.0)) throw ConfigError("training: desired_rmse must be positive");
  if (max_neurons < 1) throw ConfigError("training: max_neurons must be >= 1");
  if (!(mu_initial > 0.0) || !(mu_factor > 1.0) || !(mu_max > mu_initial)) {
    throw ConfigError("training: invalid damping schedule");
  }
}

Eigen::VectorXd pack_parameters(const RbfNetwork& net) {
  const Eigen::Index d = net.input_dim;
  const Eigen::Index m = net.output_dim;
  const Eigen::Index stride = d + 1 + m;
  Eigen::VectorXd theta(net.neurons() * stride);
  for (Eigen::Index i = 0; i < net.neurons(); ++i) {
    theta.segment(i * stride, d) = net.centers.row(i).transpose();
    theta[i * stride + d] = net.radii[i];
    theta.segment(i * stride + d + 1, m) = net.weights.row(i).transpose();
  }
  return theta;
}

void unpack_parameters(RbfNetwork& net, const Eigen::VectorXd& theta) {
  const Eigen::Index d = net.input_dim;
  const Eigen::Index m = net.output_dim;
  const Eigen::Index stride = d + 1 + m;
  if (theta.size() != net.neurons() * stride) {
    throw ConfigError("unpack_parameters: parameter vector has the wrong size");
  }
  for (Eigen::Index i = 0; i < net.neurons(); ++i) {
    net.centers.row(i) = theta.segment(i * stride, d).transpose();
    net.radii[i] = theta[i * stride + d];
    net.weights.row(i) = theta.segment(i * stride + d + 1, m).transpose();
  }
}

LmTerms lm_terms(const RbfNetwork& net, const Eigen::MatrixXd& inputs,
                 const Eigen::MatrixXd& targets) {
  const Eigen::Index p = net.neurons();
  const Eigen::Index d = net.input_dim;
  const Eigen::Index m = net.output_dim;
  const Eigen::Index a_len = d + 1;
  const Eigen::Index stride = a_len + m;
  const Eigen::Index n_nl = p * a_len;

  Eigen::MatrixXd aa = Eigen::MatrixXd::Zero(n_nl, n_nl);
  Eigen::MatrixXd ap = Eigen::MatrixXd::Zero(n_nl, p);
  Eigen::MatrixXd pp = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd g_nl = Eigen::VectorXd::Zero(n_nl);
  Eigen::MatrixXd g_w = Eigen::MatrixXd::Zero(p, m);
  double sse = 0.0;

  for (Eigen::Index start = 0; start < inputs.rows(); start += kChunk) {
    const Eigen::Index rows = std::min(kChunk, inputs.rows() - start);
    const Eigen::MatrixXd x = inputs.middleRows(start, rows);
    const Eigen::MatrixXd d2 = squared_distances(net, x);
    const Eigen::MatrixXd phi = kernels(net, d2);
    const Eigen::MatrixXd err = targets.middleRows(start, rows) - phi * net.weights;
    sse += err.squaredNorm();

    Eigen::MatrixXd a(rows, n_nl);
    for (Eigen::Index i = 0; i < p; ++i) {
      const double s = net.radii[i];
      const Eigen::ArrayXd phi_s2 = phi.col(i).array() / (s * s);
      for (Eigen::Index k = 0; k < d; ++k) {
        a.col(i * a_len + k) = phi_s2 * (x.col(k).array() - net.centers(i, k));
      }
      a.col(i * a_len + d) = phi_s2 * d2.col(i).array() / s;
    }
    aa.noalias() += a.transpose() * a;
    ap.noalias() += a.transpose() * phi;
    pp.noalias() += phi.transpose() * phi;
    const Eigen::MatrixXd ew = err * net.weights.transpose();  // rows x p, e_q . w_i
    for (Eigen::Index i = 0; i < p; ++i) {
      g_nl.segment(i * a_len, a_len).noalias() -= a.middleCols(i * a_len, a_len).transpose() * ew.col(i);
    }
    g_w.noalias() -= phi.transpose() * err;
  }

  LmTerms t;
  t.sse = sse;
  t.quasi_hessian = Eigen::MatrixXd::Zero(p * stride, p * stride);
  t.gradient = Eigen::VectorXd::Zero(p * stride);
  const Eigen::MatrixXd ww = net.weights * net.weights.transpose();
  for (Eigen::Index i = 0; i < p; ++i) {
    t.gradient.segment(i * stride, a_len) = g_nl.segment(i * a_len, a_len);
    t.gradient.segment(i * stride + a_len, m) = g_w.row(i).transpose();
    for (Eigen::Index k = 0; k < p; ++k) {
      auto block = [&](Eigen::Index r0, Eigen::Index c0, Eigen::Index nr, Eigen::Index nc) {
        return t.quasi_hessian.block(i * stride + r0, k * stride + c0, nr, nc);
      };
      block(0, 0, a_len, a_len) = ww(i, k) * aa.block(i * a_len, k * a_len, a_len, a_len);
      block(0, a_len, a_len, m) = ap.block(i * a_len, k, a_len, 1) * net.weights.row(i);
      block(a_len, 0, m, a_len) = (ap.block(k * a_len, i, a_len, 1) * net.weights.row(k)).transpose();
      block(a_len, a_len, m, m) = pp(i, k) * Eigen::MatrixXd::Identity(m, m);
    }
  }
  return t;
}

TrainingResult errcor_train(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                            const TrainingConfig& config) {
  config.validate();
  if (inputs.rows() == 0 || inputs.rows() != targets.rows()) {
    throw ConfigError("training: inputs and targets must be non-empty and of equal length");
  }
  RbfNetwork net(static_cast<int>(inputs.cols()), static_cast<int>(targets.cols()));
  TrainingResult result;
  result.network = net;
  result.rmse = rmse_of(Eigen::MatrixXd::Zero(targets.rows(), targets.cols()), targets);
  double best = result.rmse;
  int stalled_insertions = 0;

  while (net.neurons() < config.max_neurons && best > config.desired_rmse) {
    const Eigen::MatrixXd err = targets - net.forward_normalized_rows(inputs);
    Eigen::Index beta = 0;
    err.rowwise().squaredNorm().maxCoeff(&beta);  // first maximum on ties
    net.add_neuron(inputs.row(beta).transpose(), 1.0, err.row(beta).transpose());

    const double best_before = best;
    auto consider = [&](const RbfNetwork& candidate) {
      const double r = rmse(candidate, inputs, targets);
      if (r < best) {
        best = r;
        result.network = candidate;
        result.rmse = r;
      }
      return r;
    };
    double current = consider(net);

    double mu = config.mu_initial;
    for (int it = 0; it < config.max_iterations && current > config.desired_rmse; ++it) {
      const LmTerms terms = lm_terms(net, inputs, targets);
      const Eigen::VectorXd theta = pack_parameters(net);
      const Eigen::Index n = theta.size();
      bool accepted = false;
      while (mu <= config.mu_max) {
        const Eigen::MatrixXd damped =
            terms.quasi_hessian + mu * Eigen::MatrixXd::Identity(n, n);
        const Eigen::VectorXd next = theta - damped.ldlt().solve(terms.gradient);
        RbfNetwork trial = net;
        unpack_parameters(trial, next);
        const bool radii_ok = (trial.radii.array() > config.min_radius).all();
        if (next.allFinite() && radii_ok) {
          const double sse = sum_squared_error(trial, inputs, targets);
          if (std::isfinite(sse) && sse < terms.sse) {
            net = std::move(trial);
            mu = std::max(mu / config.mu_factor, std::numeric_limits<double>::min());
            accepted = true;
            break;
          }
        }
        mu *= config.mu_factor;
      }
      if (!accepted) break;
      ++result.inner_iterations;
      current = consider(net);
    }

    result.best_history.push_back(best);
    if (best < config.progress_factor * best_before) {
      stalled_insertions = 0;
    } else if (++stalled_insertions >= 2) {
      result.stalled = true;
    }
  }
  result.converged = result.rmse <= config.desired_rmse;
  return result;
}

}  // namespace mvip
