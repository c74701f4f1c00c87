#pragma once

#include <array>

#include <Eigen/Core>

#include "mvip/plant.hpp"
#include "mvip/types.hpp"

namespace mvip {

/// Minimum weighted-energy distribution of a target output over redundant
/// inputs: min 1/2 f' (Q^-1)' Q^-1 f subject to map * f = target.
/// `map` is rows x cols with cols > rows and full row rank.
struct AllocationProblem {
  Eigen::VectorXd target;
  Eigen::VectorXd weight_diag;  ///< Q_i, all > 0
  Eigen::MatrixXd map;
};

/// Solves the KKT system by dense LU with partial pivoting. Throws
/// InfeasibleError when the KKT block is singular or its condition number
/// exceeds 1e12; ConfigError on malformed inputs.
Eigen::VectorXd allocate(const AllocationProblem& problem);

ActuationVector allocate(const Wrench& wrench, const Vector8& weight_diag, const Matrix68& map);

/// 1/2 sum (f_i / Q_i)^2
double allocation_cost(const Eigen::VectorXd& f, const Eigen::VectorXd& weight_diag);

/// Q_i evaluated at each coil position.
Vector8 stiffness_at(const std::array<CoilPosition, kActuatorCount>& coils,
                     const PlatformParams& params);

/// I_i = f_i / Q_i(y_c, z_c). Throws StrokeLimitError if any |Q_i| falls
/// below `min_stiffness`.
std::array<CoilPosition, kActuatorCount> forces_to_currents(
    const ActuationVector& f, std::array<CoilPosition, kActuatorCount> coils,
    const PlatformParams& params, double min_stiffness = 1e-3);

/// Allocation at the present coil stiffness followed by current inversion.
/// Returns the coils with their currents set.
std::array<CoilPosition, kActuatorCount> drive_actuators(const Wrench& wrench, const Vector6& pose,
                                                         const PlatformParams& params,
                                                         const Matrix68& map);

/// Wrench produced by the given currents with the coils moved to `pose`.
Wrench applied_wrench(const std::array<CoilPosition, kActuatorCount>& driven, const Vector6& pose,
                      const PlatformParams& params, const Matrix68& map);

}  // namespace mvip
