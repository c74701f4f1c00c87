#include "mvip/inversion.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "mvip/errors.hpp"

namespace mvip {

Vector6 output_accelerations(const Wrench& wrench, const PlatformParams& params) {
  const double m = params.mass;
  const double ix = params.inertia.x();
  const double iy = params.inertia.y();
  const double iz = params.inertia.z();
  const double rx = params.com_shift.x();
  const double ry = params.com_shift.y();
  const double rz = params.com_shift.z();
  const Vector6 u = wrench.vector();

  const double tx = (u[3] - u[1] * rz + u[2] * ry) / ix;
  const double ty = (u[4] - u[2] * rx + u[0] * rz) / iy;
  const double tz = (u[5] - u[0] * ry + u[1] * rx) / iz;

  Vector6 a;
  a[0] = u[0] / m + tz * ry - ty * rz;
  a[1] = u[1] / m - tz * rx + tx * rz;
  a[2] = u[2] / m + ty * rx - tx * ry;
  a[3] = tx;
  a[4] = ty;
  a[5] = tz;
  return a;
}

Vector6 output_accelerations(const Wrench& wrench, const PlatformParams& params,
                             const Vector6& pose) {
  Vector6 a = output_accelerations(wrench, params);
  if (params.residual) a += params.residual->evaluate(pose);
  return a;
}

InversionReport jacobian(const PlatformParams& params) {
  const double m = params.mass;
  const double ix = params.inertia.x();
  const double iy = params.inertia.y();
  const double iz = params.inertia.z();
  const double rx = params.com_shift.x();
  const double ry = params.com_shift.y();
  const double rz = params.com_shift.z();

  InversionReport rep;
  Matrix6& j = rep.jacobian;
  j << 1 / m - rz * rz / iy - ry * ry / iz, rx * ry / iz, rx * rz / iy, 0, -rz / iy, ry / iz,
       rx * ry / iz, 1 / m - rz * rz / ix - rx * rx / iz, ry * rz / ix, rz / ix, 0, -rx / iz,
       rx * rz / iy, ry * rz / ix, 1 / m - ry * ry / ix - rx * rx / iy, -ry / ix, rx / iy, 0,
       0, -rz / ix, ry / ix, 1 / ix, 0, 0,
       rz / iy, 0, -rx / iy, 0, 1 / iy, 0,
       -ry / iz, rx / iz, 0, 0, 0, 1 / iz;

  rep.determinant = Eigen::PartialPivLU<Matrix6>(j).determinant();
  rep.closed_form = 1.0 / (ix * iy * iz * m * m * m);
  rep.invertible = std::isfinite(rep.determinant) && rep.determinant != 0.0;
  return rep;
}

Wrench analytic_inverse(const Vector6& desired_accel, const PlatformParams& params) {
  const InversionReport rep = jacobian(params);
  if (!rep.invertible) {
    throw InfeasibleError("analytic_inverse: Jacobian is singular");
  }
  Eigen::PartialPivLU<Matrix6> lu(rep.jacobian);
  const Vector6 u = lu.solve(desired_accel);
  if (!u.allFinite()) {
    throw InfeasibleError("analytic_inverse: non-finite wrench");
  }
  return Wrench::from_vector(u);
}

Wrench nominal_inverse(const Vector6& desired_accel, const PlatformParams& nominal) {
  Vector6 scale;
  scale << nominal.mass, nominal.mass, nominal.mass, nominal.inertia;
  return Wrench::from_vector(scale.cwiseProduct(desired_accel));
}

}  // namespace mvip
