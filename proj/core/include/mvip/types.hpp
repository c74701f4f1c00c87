#pragma once

#include <Eigen/Core>

namespace mvip {

using Vector3 = Eigen::Vector3d;
using Vector6 = Eigen::Matrix<double, 6, 1>;
using Vector8 = Eigen::Matrix<double, 8, 1>;
using Vector12 = Eigen::Matrix<double, 12, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Matrix68 = Eigen::Matrix<double, 6, 8>;

inline constexpr int kActuatorCount = 8;
inline constexpr int kChannelCount = 6;

/// Virtual actuation [F_N, tau_N] applied at the floater origin.
struct Wrench {
  Vector3 force = Vector3::Zero();
  Vector3 torque = Vector3::Zero();

  static Wrench from_vector(const Vector6& v) {
    return {v.head<3>(), v.tail<3>()};
  }
  Vector6 vector() const {
    Vector6 v;
    v << force, torque;
    return v;
  }
  bool all_finite() const { return force.allFinite() && torque.allFinite(); }
};

/// Forces of the eight actuators, f_1..f_8 in newtons.
struct ActuationVector {
  Vector8 forces = Vector8::Zero();
};

/// Extended state: pose [r_c, theta] followed by rates [v, omega].
/// The pose is the floater relative to the stator.
struct StateVector {
  Vector6 pose = Vector6::Zero();
  Vector6 rates = Vector6::Zero();

  Vector12 vector() const {
    Vector12 v;
    v << pose, rates;
    return v;
  }
  static StateVector from_vector(const Vector12& v) {
    return {v.head<6>(), v.tail<6>()};
  }
  bool all_finite() const { return pose.allFinite() && rates.allFinite(); }
};

}  // namespace mvip
