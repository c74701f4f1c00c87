#include "mvip/plant.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "mvip/errors.hpp"

namespace mvip {
namespace {

Eigen::Matrix3d skew(const Vector3& v) {
  Eigen::Matrix3d s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return s;
}

// Force axis of each actuator: 0 = x, 1 = y, 2 = z.
constexpr std::array<int, kActuatorCount> kForceAxis{0, 2, 1, 2, 0, 2, 1, 2};

}  // namespace

Vector6 ResidualModel::evaluate(const Vector6& pose) const {
  const Vector6 arg = linear * pose + quadratic * pose.cwiseAbs2();
  return amplitude.cwiseProduct(arg.array().tanh().matrix());
}

void PlatformParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw ConfigError("platform: mass must be positive and finite");
  }
  for (int i = 0; i < 3; ++i) {
    if (!(inertia[i] > 0.0) || !std::isfinite(inertia[i])) {
      throw ConfigError("platform: inertia entry " + std::to_string(i) + " must be positive");
    }
  }
  if (!com_shift.allFinite()) {
    throw ConfigError("platform: com_shift must be finite");
  }
  for (int i = 0; i < kActuatorCount; ++i) {
    if (!std::isfinite(actuators[i].x) || !std::isfinite(actuators[i].y)) {
      throw ConfigError("platform: actuator " + std::to_string(i + 1) + " position not finite");
    }
    const auto& k = stiffness[i];
    if (!std::isfinite(k.k1) || !std::isfinite(k.k2) || !std::isfinite(k.k3)) {
      throw ConfigError("platform: stiffness of actuator " + std::to_string(i + 1) +
                        " not finite");
    }
  }
  if (residual) {
    if (!residual->amplitude.allFinite() || !residual->linear.allFinite() ||
        !residual->quadratic.allFinite()) {
      throw ConfigError("platform: residual model must have a finite bound");
    }
  }
  if (!(stroke.array() > 0.0).all()) {
    throw ConfigError("platform: stroke bounds must be positive");
  }
}

PlatformParams default_platform() {
  PlatformParams p;
  constexpr double a = 0.2;
  // Horizontal actuators 1/5 push along x, 3/7 along y; vertical ones sit at
  // the corners of the floater.
  p.actuators = {{{a, a}, {a, a}, {-a, a}, {-a, a}, {-a, -a}, {-a, -a}, {a, -a}, {a, -a}}};
  constexpr double k3 = 20.0;
  const double span = p.stroke[0] * p.stroke[0];
  for (auto& k : p.stiffness) {
    k = {0.2 * k3 / span, 0.2 * k3 / span, k3};
  }
  return p;
}

PlatformParams with_payload(const PlatformParams& base, double payload_mass,
                            const Vector3& offset) {
  if (!(payload_mass >= 0.0)) {
    throw ConfigError("payload mass must be non-negative");
  }
  PlatformParams p = base;
  const double total = base.mass + payload_mass;
  p.com_shift = (base.mass * base.com_shift + payload_mass * offset) / total;
  p.mass = total;
  p.inertia += payload_mass * Vector3(offset.y() * offset.y() + offset.z() * offset.z(),
                                      offset.x() * offset.x() + offset.z() * offset.z(),
                                      offset.x() * offset.x() + offset.y() * offset.y());
  return p;
}

Matrix68 actuation_map(const PlatformParams& params) {
  const auto& s = params.actuators;
  Matrix68 c = Matrix68::Zero();
  c(0, 0) = 1.0;
  c(0, 4) = -1.0;
  c(1, 2) = 1.0;
  c(1, 6) = -1.0;
  for (int i : {1, 3, 5, 7}) {
    c(2, i) = 1.0;
    c(3, i) = s[i].y;
    c(4, i) = -s[i].x;
  }
  c(5, 0) = -s[0].y;
  c(5, 2) = s[2].x;
  c(5, 4) = s[4].y;
  c(5, 6) = -s[6].x;

  Eigen::FullPivLU<Matrix68> lu(c);
  lu.setThreshold(1e-10);
  if (lu.rank() < 6) {
    throw ConfigError("actuator layout is degenerate: actuation map rank " +
                      std::to_string(lu.rank()) + " < 6");
  }
  return c;
}

double current_stiffness(double y_c, double z_c, const StiffnessCoeffs& k) {
  return k.k1 * y_c * y_c + k.k2 * z_c * z_c + k.k3;
}

double actuator_force(const CoilPosition& coil, const StiffnessCoeffs& k, double residual) {
  return current_stiffness(coil.y_c, coil.z_c, k) * coil.current + residual;
}

std::array<CoilPosition, kActuatorCount> coil_positions(const Vector6& pose,
                                                        const PlatformParams& params) {
  const Vector3 r = pose.head<3>();
  const Vector3 theta = pose.tail<3>();
  std::array<CoilPosition, kActuatorCount> coils{};
  for (int i = 0; i < kActuatorCount; ++i) {
    const Vector3 site(params.actuators[i].x, params.actuators[i].y, 0.0);
    const Vector3 d = r + theta.cross(site);
    switch (kForceAxis[i]) {
      case 0: coils[i] = {d.y(), d.z(), 0.0}; break;
      case 1: coils[i] = {d.x(), d.z(), 0.0}; break;
      default: coils[i] = {d.x(), d.y(), 0.0}; break;
    }
  }
  return coils;
}

ActuationVector currents_to_forces(const std::array<CoilPosition, kActuatorCount>& coils,
                                   const PlatformParams& params) {
  ActuationVector f;
  for (int i = 0; i < kActuatorCount; ++i) {
    f.forces[i] = actuator_force(coils[i], params.stiffness[i]);
  }
  return f;
}

double coupling_acceleration_x(const StateVector& state, const PlatformParams& params, double f1,
                               double f5, double d, const Vector3& angular_accel) {
  const Vector3 w = state.rates.tail<3>();
  const Vector3& dr = params.com_shift;
  double acc = (f1 - f5 + d) / params.mass;
  if (params.gravity) {
    acc -= params.gravity_accel * std::cos(state.pose[3]);
  }
  acc += (w.y() * w.y() + w.z() * w.z()) * dr.x();
  acc += (angular_accel.z() - w.x() * w.y()) * dr.y();
  acc -= (angular_accel.y() + w.x() * w.z()) * dr.z();
  return acc;
}

Vector6 accelerations(const StateVector& state, const Wrench& wrench, const PlatformParams& params,
                      const Vector6& external) {
  const Vector3& dr = params.com_shift;
  const Vector3 w = state.rates.tail<3>();
  const Vector3 theta = state.pose.tail<3>();
  const Vector3 inertia = params.inertia;

  Vector3 moment = wrench.torque + dr.cross(wrench.force);
  if (params.omega_products) {
    moment -= w.cross(inertia.cwiseProduct(w));
  }
  if (params.gravity) {
    moment -= params.gravity_accel * skew(dr) * theta;
  }
  const Vector3 alpha = moment.cwiseQuotient(inertia);

  Vector3 lin = wrench.force / params.mass + dr.cross(alpha);
  if (params.omega_products) {
    lin -= w.cross(w.cross(dr));
  }
  if (params.gravity) {
    lin -= params.gravity_accel * theta;
  }

  Vector6 acc;
  acc << lin, alpha;
  if (params.residual) {
    acc += params.residual->evaluate(state.pose);
  }
  return acc + external;
}

StateVector step_dynamics(const StateVector& state, const Wrench& wrench,
                          const PlatformParams& params, double dt, const Vector6& external) {
  if (!(dt > 0.0) || dt > 1e-3) {
    throw ConfigError("step_dynamics: dt must lie in (0, 1 ms]");
  }
  auto deriv = [&](const StateVector& s) {
    StateVector d;
    d.pose = s.rates;
    d.rates = accelerations(s, wrench, params, external);
    return d;
  };
  auto axpy = [](const StateVector& s, double h, const StateVector& d) {
    return StateVector{s.pose + h * d.pose, s.rates + h * d.rates};
  };

  const StateVector k1 = deriv(state);
  const StateVector k2 = deriv(axpy(state, 0.5 * dt, k1));
  const StateVector k3 = deriv(axpy(state, 0.5 * dt, k2));
  const StateVector k4 = deriv(axpy(state, dt, k3));

  StateVector next;
  next.pose = state.pose + dt / 6.0 * (k1.pose + 2.0 * k2.pose + 2.0 * k3.pose + k4.pose);
  next.rates = state.rates + dt / 6.0 * (k1.rates + 2.0 * k2.rates + 2.0 * k3.rates + k4.rates);
  if (!next.all_finite()) {
    throw DivergenceError("plant state became non-finite");
  }
  return next;
}

double kinetic_energy(const StateVector& state, const PlatformParams& params) {
  const Vector3 v = state.rates.head<3>();
  const Vector3 w = state.rates.tail<3>();
  return 0.5 * params.mass * v.squaredNorm() + 0.5 * w.dot(params.inertia.cwiseProduct(w));
}

}  // namespace mvip
