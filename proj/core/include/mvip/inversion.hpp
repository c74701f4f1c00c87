#pragma once

#include <array>

#include "mvip/plant.hpp"
#include "mvip/types.hpp"

namespace mvip {

/// Invertibility analysis of the simplified plant: input wrench U to output
/// accelerations Y''.
struct InversionReport {
  Matrix6 jacobian = Matrix6::Zero();
  double determinant = 0.0;        ///< numeric, from LU
  double closed_form = 0.0;        ///< 1 / (Jx Jy Jz m^3)
  std::array<int, 6> relative_order{2, 2, 2, 2, 2, 2};
  bool invertible = false;
};

/// Y'' = A(U): output accelerations for a wrench. The residual term is
/// included when `pose` is given and the platform carries one.
Vector6 output_accelerations(const Wrench& wrench, const PlatformParams& params);
Vector6 output_accelerations(const Wrench& wrench, const PlatformParams& params,
                             const Vector6& pose);

/// dA/dU laid out entry by entry.
InversionReport jacobian(const PlatformParams& params);

/// Nominal inverse: solves J U = a on every call (no residual term).
/// Throws InfeasibleError for a singular Jacobian.
Wrench analytic_inverse(const Vector6& desired_accel, const PlatformParams& params);

/// Diagonal inverse that ignores the CoM shift: U = diag(m, m, m, Jx, Jy, Jz) a.
/// This is what a controller tuned for the bare floater applies after a
/// payload has been redeployed.
Wrench nominal_inverse(const Vector6& desired_accel, const PlatformParams& nominal);

}  // namespace mvip
