#pragma once

#include <array>
#include <optional>

#include "mvip/types.hpp"

namespace mvip {

struct ActuatorSite {
  double x = 0.0;  ///< m, stator frame
  double y = 0.0;  ///< m, stator frame
};

/// Coefficients of the current-stiffness surface Q(y_c, z_c) = K1 y_c^2 + K2 z_c^2 + K3.
struct StiffnessCoeffs {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 1.0;
};

/// Bounded unmodeled acceleration delta_i(X_p) = amplitude_i * tanh(L_i . X_p + Q_i . X_p^2).
struct ResidualModel {
  Vector6 amplitude = Vector6::Zero();
  Matrix6 linear = Matrix6::Zero();
  Matrix6 quadratic = Matrix6::Zero();

  double bound() const { return amplitude.cwiseAbs().maxCoeff(); }
  Vector6 evaluate(const Vector6& pose) const;
};

struct PlatformParams {
  double mass = 20.0;                       ///< kg
  Vector3 inertia{0.6, 0.6, 1.0};           ///< kg m^2, diagonal of J_m
  Vector3 com_shift = Vector3::Zero();      ///< m, O -> assembly CoM
  std::array<ActuatorSite, kActuatorCount> actuators{};
  std::array<StiffnessCoeffs, kActuatorCount> stiffness{};
  std::optional<ResidualModel> residual;

  /// Terms that the reorganized state model drops; off by default.
  bool gravity = false;
  bool omega_products = false;
  double gravity_accel = 9.81;

  /// Relative pose box; leaving it is a collision.
  Vector6 stroke{0.03, 0.03, 0.03, 0.1, 0.1, 0.1};

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;
};

/// Square-stator layout used by the default configuration.
PlatformParams default_platform();

/// Adds a point-mass payload at `offset` from O: mass, CoM shift and
/// parallel-axis inertia are updated.
PlatformParams with_payload(const PlatformParams& base, double payload_mass, const Vector3& offset);

/// C_M: maps the eight actuator forces to the wrench at O. Throws
/// ConfigError if the layout has rank below six.
Matrix68 actuation_map(const PlatformParams& params);

struct CoilPosition {
  double y_c = 0.0;      ///< m, actuator-local
  double z_c = 0.0;      ///< m, actuator-local
  double current = 0.0;  ///< A
};

double current_stiffness(double y_c, double z_c, const StiffnessCoeffs& k);

double actuator_force(const CoilPosition& coil, const StiffnessCoeffs& k, double residual = 0.0);

/// Coil offsets of every actuator for the given relative pose (small-angle
/// kinematics). Currents are left at zero.
std::array<CoilPosition, kActuatorCount> coil_positions(const Vector6& pose,
                                                        const PlatformParams& params);

/// Forces produced by the given currents at the present coil positions.
ActuationVector currents_to_forces(const std::array<CoilPosition, kActuatorCount>& coils,
                                   const PlatformParams& params);

/// Expanded x-axis translation equation with explicit coupling terms.
/// `angular_accel` supplies omega-dot, which the expansion needs.
double coupling_acceleration_x(const StateVector& state, const PlatformParams& params, double f1,
                               double f5, double d, const Vector3& angular_accel);

/// Pose accelerations of the assembly under `wrench` plus an externally
/// imposed acceleration (base motion, cable path).
Vector6 accelerations(const StateVector& state, const Wrench& wrench, const PlatformParams& params,
                      const Vector6& external = Vector6::Zero());

/// One classical RK4 step with the wrench and external acceleration held
/// constant. Requires 0 < dt <= 1 ms. Throws DivergenceError on a
/// non-finite result.
StateVector step_dynamics(const StateVector& state, const Wrench& wrench,
                          const PlatformParams& params, double dt,
                          const Vector6& external = Vector6::Zero());

double kinetic_energy(const StateVector& state, const PlatformParams& params);

}  // namespace mvip
