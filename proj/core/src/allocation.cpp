#include "mvip/allocation.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "mvip/errors.hpp"

namespace mvip {

Eigen::VectorXd allocate(const AllocationProblem& problem) {
  const auto& c = problem.map;
  const Eigen::Index rows = c.rows();
  const Eigen::Index cols = c.cols();
  if (rows == 0 || cols <= rows) {
    throw ConfigError("allocation: map must be wide (more inputs than outputs)");
  }
  if (problem.target.size() != rows || problem.weight_diag.size() != cols) {
    throw ConfigError("allocation: dimension mismatch between map, target and weights");
  }
  if (!(problem.weight_diag.array() > 0.0).all() || !problem.weight_diag.allFinite()) {
    throw ConfigError("allocation: weights must be positive and finite");
  }

  const Eigen::Index n = rows + cols;
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n, n);
  kkt.topLeftCorner(cols, cols) = problem.weight_diag.array().square().inverse().matrix().asDiagonal();
  kkt.topRightCorner(cols, rows) = -c.transpose();
  kkt.bottomLeftCorner(rows, cols) = c;

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs.tail(rows) = problem.target;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw InfeasibleError("allocation: KKT block singular (rank " + std::to_string(lu.rank()) +
                          " of " + std::to_string(n) + ")");
  }
  Eigen::VectorXd sol = lu.solve(rhs);
  if (!sol.allFinite()) {
    throw InfeasibleError("allocation: non-finite solution");
  }
  return sol.head(cols);
}

ActuationVector allocate(const Wrench& wrench, const Vector8& weight_diag, const Matrix68& map) {
  const Eigen::VectorXd f = allocate(AllocationProblem{wrench.vector(), weight_diag, map});
  return ActuationVector{f};
}

double allocation_cost(const Eigen::VectorXd& f, const Eigen::VectorXd& weight_diag) {
  return 0.5 * f.cwiseQuotient(weight_diag).squaredNorm();
}

Vector8 stiffness_at(const std::array<CoilPosition, kActuatorCount>& coils,
                     const PlatformParams& params) {
  Vector8 q;
  for (int i = 0; i < kActuatorCount; ++i) {
    q[i] = current_stiffness(coils[i].y_c, coils[i].z_c, params.stiffness[i]);
  }
  return q;
}

std::array<CoilPosition, kActuatorCount> forces_to_currents(
    const ActuationVector& f, std::array<CoilPosition, kActuatorCount> coils,
    const PlatformParams& params, double min_stiffness) {
  for (int i = 0; i < kActuatorCount; ++i) {
    const double q = current_stiffness(coils[i].y_c, coils[i].z_c, params.stiffness[i]);
    if (!(std::abs(q) >= min_stiffness)) {
      throw StrokeLimitError("actuator " + std::to_string(i + 1) +
                             " ineffective at this coil position (|Q| = " + std::to_string(q) +
                             ")");
    }
    coils[i].current = f.forces[i] / q;
  }
  return coils;
}

std::array<CoilPosition, kActuatorCount> drive_actuators(const Wrench& wrench, const Vector6& pose,
                                                         const PlatformParams& params,
                                                         const Matrix68& map) {
  const auto coils = coil_positions(pose, params);
  const ActuationVector f = allocate(wrench, stiffness_at(coils, params), map);
  return forces_to_currents(f, coils, params);
}

Wrench applied_wrench(const std::array<CoilPosition, kActuatorCount>& driven, const Vector6& pose,
                      const PlatformParams& params, const Matrix68& map) {
  auto coils = coil_positions(pose, params);
  for (int i = 0; i < kActuatorCount; ++i) coils[i].current = driven[i].current;
  return Wrench::from_vector(map * currents_to_forces(coils, params).forces);
}

}  // namespace mvip
