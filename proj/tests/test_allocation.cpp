#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "mvip/allocation.hpp"
#include "mvip/errors.hpp"
#include "mvip/scenario.hpp"

namespace mvip {
namespace {

// Projected gradient on the affine constraint set, run to a fixed point.
Eigen::VectorXd projected_gradient(const Eigen::MatrixXd& c, const Eigen::VectorXd& target,
                                   const Eigen::VectorXd& q) {
  const Eigen::MatrixXd cct_inv = (c * c.transpose()).inverse();
  const Eigen::MatrixXd proj =
      Eigen::MatrixXd::Identity(c.cols(), c.cols()) - c.transpose() * cct_inv * c;
  Eigen::VectorXd f = c.transpose() * cct_inv * target;
  const Eigen::VectorXd h = q.array().square().inverse();
  const double step = 1.0 / h.maxCoeff();
  for (int it = 0; it < 200000; ++it) {
    const Eigen::VectorXd g = proj * h.cwiseProduct(f);
    f -= step * g;
    if (g.norm() < 1e-15 * (1.0 + f.norm())) break;
  }
  return f;
}

TEST(Allocation, MatchesProjectedGradientOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> w(0.5, 2.0);
  const Matrix68 c = actuation_map(default_platform());
  for (int trial = 0; trial < 100; ++trial) {
    Vector6 target;
    Vector8 q;
    for (auto& v : target) v = 10.0 * u(rng);
    for (auto& v : q) v = w(rng);
    const Eigen::VectorXd f = allocate(AllocationProblem{target, q, c});
    const Eigen::VectorXd oracle = projected_gradient(c, target, q);
    EXPECT_LE((c * f - target).norm(), 1e-9);
    const double cost = allocation_cost(f, q);
    EXPECT_NEAR(cost, allocation_cost(oracle, q), 1e-6 * (1.0 + cost));
    EXPECT_LE(cost, allocation_cost(oracle, q) + 1e-12 * (1.0 + cost));
  }
}

TEST(Allocation, WeightedMinimumNormClosedForm) {
  const Matrix68 c = actuation_map(payload_platform());
  Vector8 q;
  q << 1.0, 2.0, 0.5, 1.5, 1.0, 0.7, 1.2, 0.9;
  Vector6 target;
  target << 1.0, -2.0, 0.5, 0.1, -0.2, 0.05;
  const Eigen::MatrixXd wq = q.array().square().matrix().asDiagonal();
  const Eigen::VectorXd expected =
      wq * c.transpose() * (c * wq * c.transpose()).ldlt().solve(target);
  const ActuationVector f = allocate(Wrench::from_vector(target), q, c);
  EXPECT_LE((f.forces - expected).norm(), 1e-12);
}

TEST(Allocation, OptimalityIsLocal) {
  // Any feasible perturbation raises the cost.
  const Matrix68 c = actuation_map(default_platform());
  const Vector8 q = Vector8::Ones();
  Vector6 target;
  target << 3.0, 1.0, -2.0, 0.4, 0.0, -0.1;
  const Eigen::VectorXd f = allocate(AllocationProblem{target, q, c});
  Eigen::FullPivLU<Eigen::MatrixXd> lu(c);
  const Eigen::MatrixXd null = lu.kernel();
  ASSERT_EQ(null.cols(), 2);
  for (int i = 0; i < null.cols(); ++i) {
    EXPECT_GT(allocation_cost(f + 1e-3 * null.col(i), q), allocation_cost(f, q));
    EXPECT_GT(allocation_cost(f - 1e-3 * null.col(i), q), allocation_cost(f, q));
  }
}

TEST(Allocation, ZeroWrenchGivesZeroForces) {
  const Matrix68 c = actuation_map(default_platform());
  const ActuationVector f = allocate(Wrench{}, Vector8::Ones(), c);
  EXPECT_EQ(f.forces.norm(), 0.0);
}

TEST(Allocation, RejectsMalformedProblems) {
  const Matrix68 c = actuation_map(default_platform());
  Vector8 q = Vector8::Ones();
  q[3] = 0.0;
  EXPECT_THROW(allocate(Wrench{}, q, c), ConfigError);
  EXPECT_THROW(allocate(AllocationProblem{Eigen::VectorXd::Zero(5), Vector8::Ones(), c}),
               ConfigError);
  EXPECT_THROW(allocate(AllocationProblem{Eigen::VectorXd::Zero(6), Eigen::VectorXd::Ones(6),
                                          Eigen::MatrixXd::Identity(6, 6)}),
               ConfigError);
}

TEST(Allocation, RankDeficientMapIsInfeasible) {
  Matrix68 c = actuation_map(default_platform());
  c.row(5) = c.row(4);
  EXPECT_THROW(allocate(Wrench{}, Vector8::Ones(), c), InfeasibleError);
}

TEST(Allocation, CurrentsFollowStiffness) {
  const PlatformParams p = default_platform();
  Vector6 pose = Vector6::Zero();
  pose[0] = 0.01;
  const auto coils = coil_positions(pose, p);
  ActuationVector f;
  f.forces = Vector8::Constant(2.0);
  const auto driven = forces_to_currents(f, coils, p);
  for (int i = 0; i < kActuatorCount; ++i) {
    EXPECT_NEAR(actuator_force(driven[i], p.stiffness[i]), 2.0, 1e-12);
  }
}

TEST(Allocation, IneffectiveActuatorRaisesStrokeLimit) {
  PlatformParams p = default_platform();
  p.stiffness[2] = {0.0, 0.0, 0.0};
  ActuationVector f;
  EXPECT_THROW(forces_to_currents(f, coil_positions(Vector6::Zero(), p), p), StrokeLimitError);
}

TEST(Allocation, DriveThenApplyAtSamePoseReproducesWrench) {
  const PlatformParams p = payload_platform();
  const Matrix68 c = actuation_map(p);
  Vector6 pose;
  pose << 0.002, -0.001, 0.003, 0.01, -0.02, 0.005;
  const Wrench w{{1.0, -2.0, 3.0}, {0.2, -0.1, 0.3}};
  const auto driven = drive_actuators(w, pose, p, c);
  const Wrench back = applied_wrench(driven, pose, p, c);
  EXPECT_LE((back.vector() - w.vector()).norm(), 1e-12);
}

}  // namespace
}  // namespace mvip
