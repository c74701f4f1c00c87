#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mvip/errcor.hpp"
#include "mvip/errors.hpp"

namespace mvip {
namespace {

struct Problem {
  Eigen::MatrixXd x;
  Eigen::MatrixXd t;
};

Problem smooth_problem(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Problem p{Eigen::MatrixXd(n, 2), Eigen::MatrixXd(n, 2)};
  for (int i = 0; i < n; ++i) {
    const double a = u(rng);
    const double b = u(rng);
    p.x.row(i) << a, b;
    p.t.row(i) << std::sin(2.0 * a) * std::cos(b), 0.5 * a * b - 0.2 * b * b;
  }
  return p;
}

RbfNetwork random_net(int neurons, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RbfNetwork net(2, 2);
  for (int i = 0; i < neurons; ++i) {
    net.add_neuron(Eigen::Vector2d(u(rng), u(rng)), 0.4 + 0.3 * std::abs(u(rng)),
                   Eigen::Vector2d(u(rng), u(rng)));
  }
  return net;
}

double half_sse(const RbfNetwork& net, const Problem& p) {
  return 0.5 * (p.t - net.forward_normalized_rows(p.x)).squaredNorm();
}

TEST(Errcor, PackUnpackRoundTrip) {
  RbfNetwork net = random_net(3, 1);
  const Eigen::VectorXd theta = pack_parameters(net);
  EXPECT_EQ(theta.size(), 3 * (2 + 1 + 2));
  RbfNetwork other = random_net(3, 2);
  unpack_parameters(other, theta);
  EXPECT_EQ(other.centers, net.centers);
  EXPECT_EQ(other.radii, net.radii);
  EXPECT_EQ(other.weights, net.weights);
}

TEST(Errcor, GradientMatchesFiniteDifferences) {
  const Problem p = smooth_problem(60, 3);
  RbfNetwork net = random_net(3, 4);
  const LmTerms terms = lm_terms(net, p.x, p.t);
  EXPECT_NEAR(terms.sse, 2.0 * half_sse(net, p), 1e-12 * (1.0 + terms.sse));
  const Eigen::VectorXd theta = pack_parameters(net);
  const double h = 1e-6;
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    RbfNetwork up = net;
    RbfNetwork dn = net;
    Eigen::VectorXd tu = theta;
    Eigen::VectorXd td = theta;
    tu[k] += h;
    td[k] -= h;
    unpack_parameters(up, tu);
    unpack_parameters(dn, td);
    const double fd = (half_sse(up, p) - half_sse(dn, p)) / (2.0 * h);
    EXPECT_NEAR(terms.gradient[k], fd, 1e-5 * std::max(1.0, std::abs(fd))) << "parameter " << k;
  }
}

TEST(Errcor, QuasiHessianIsJtJ) {
  const Problem p = smooth_problem(40, 5);
  RbfNetwork net = random_net(2, 6);
  const LmTerms terms = lm_terms(net, p.x, p.t);
  const Eigen::VectorXd theta = pack_parameters(net);
  const Eigen::Index n = theta.size();
  const Eigen::Index rows = p.x.rows() * 2;
  Eigen::MatrixXd jac(rows, n);
  const double h = 1e-6;
  for (Eigen::Index k = 0; k < n; ++k) {
    RbfNetwork up = net;
    RbfNetwork dn = net;
    Eigen::VectorXd tu = theta;
    Eigen::VectorXd td = theta;
    tu[k] += h;
    td[k] -= h;
    unpack_parameters(up, tu);
    unpack_parameters(dn, td);
    const Eigen::MatrixXd d =
        (up.forward_normalized_rows(p.x) - dn.forward_normalized_rows(p.x)) / (2.0 * h);
    jac.col(k) = Eigen::Map<const Eigen::VectorXd>(d.data(), rows);
  }
  const Eigen::MatrixXd jtj = jac.transpose() * jac;
  EXPECT_LE((terms.quasi_hessian - jtj).norm(), 1e-6 * jtj.norm());
  EXPECT_LE((terms.quasi_hessian - terms.quasi_hessian.transpose()).norm(), 1e-12);
}

TEST(Errcor, TrainingReducesErrorMonotonically) {
  const Problem p = smooth_problem(300, 7);
  TrainingConfig cfg;
  cfg.max_neurons = 8;
  cfg.desired_rmse = 1e-6;
  const TrainingResult r = errcor_train(p.x, p.t, cfg);
  ASSERT_FALSE(r.best_history.empty());
  for (std::size_t i = 1; i < r.best_history.size(); ++i) {
    EXPECT_LE(r.best_history[i], r.best_history[i - 1]);
  }
  EXPECT_LE(r.network.neurons(), 8);
  EXPECT_DOUBLE_EQ(r.rmse, rmse(r.network, p.x, p.t));
  EXPECT_DOUBLE_EQ(r.rmse, r.best_history.back());
  EXPECT_LT(r.rmse, 0.05);
}

TEST(Errcor, ConvergesOnSingleGaussian) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd x(200, 2);
  Eigen::MatrixXd t(200, 1);
  for (int i = 0; i < 200; ++i) {
    x.row(i) << u(rng), u(rng);
    t(i, 0) = 0.7 * std::exp(-(x.row(i) - Eigen::RowVector2d(0.2, -0.1)).squaredNorm() / 0.18);
  }
  TrainingConfig cfg;
  cfg.desired_rmse = 1e-3;
  cfg.max_neurons = 5;
  const TrainingResult r = errcor_train(x, t, cfg);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.rmse, 1e-3);
}

TEST(Errcor, TighterTargetNeverUsesFewerNeurons) {
  const Problem p = smooth_problem(200, 11);
  int prev = 0;
  for (double ed : {1e-1, 3e-2, 1e-2, 1e-3}) {
    TrainingConfig cfg;
    cfg.desired_rmse = ed;
    cfg.max_neurons = 10;
    cfg.max_iterations = 10;
    const int used = errcor_train(p.x, p.t, cfg).network.neurons();
    EXPECT_GE(used, prev) << "e_d = " << ed;
    prev = used;
  }
}

TEST(Errcor, Deterministic) {
  const Problem p = smooth_problem(150, 13);
  TrainingConfig cfg;
  cfg.max_neurons = 4;
  const TrainingResult a = errcor_train(p.x, p.t, cfg);
  const TrainingResult b = errcor_train(p.x, p.t, cfg);
  EXPECT_EQ(pack_parameters(a.network), pack_parameters(b.network));
  EXPECT_EQ(a.best_history, b.best_history);
}

TEST(Errcor, RejectsInvalidConfig) {
  const Problem p = smooth_problem(10, 1);
  TrainingConfig cfg;
  cfg.desired_rmse = 0.0;
  EXPECT_THROW(errcor_train(p.x, p.t, cfg), ConfigError);
  cfg = {};
  cfg.max_neurons = 0;
  EXPECT_THROW(errcor_train(p.x, p.t, cfg), ConfigError);
  EXPECT_THROW(errcor_train(p.x, p.t.topRows(5), TrainingConfig{}), ConfigError);
}

}  // namespace
}  // namespace mvip
