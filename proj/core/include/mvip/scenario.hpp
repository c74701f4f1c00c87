#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "mvip/dataset.hpp"
#include "mvip/disturbance.hpp"
#include "mvip/hafimc.hpp"
#include "mvip/plant.hpp"
#include "mvip/rbf_network.hpp"

namespace mvip {

enum class ControllerMode { Off, Pid, Imc, Hafimc };
enum class InversionMode { None, Analytic, Learned };

std::string to_string(ControllerMode m);
std::string to_string(InversionMode m);
ControllerMode controller_from_string(const std::string& s);  ///< off | pid | imc | hafimc
InversionMode inversion_from_string(const std::string& s);    ///< none | analytic | learned

/// Umbilical path from stator to floater: a spring-damper on the relative
/// pose plus FIR leakage of stator acceleration (taps at the control rate).
struct TransmissionPath {
  bool enabled = true;
  double resonance_hz = 0.15;
  double damping = 0.1;
  std::vector<double> leakage{0.05, 0.02};

  void validate() const;
};

/// Relative-position step on one channel.
struct StepCommand {
  int channel = 0;
  double time = 0.0;  ///< s
  double size = 0.0;  ///< m or rad
};

struct ScenarioConfig {
  std::string name = "scenario";
  PlatformParams plant = default_platform();    ///< flown platform
  PlatformParams nominal = default_platform();  ///< bare-floater model for InversionMode::None
  ControllerMode controller = ControllerMode::Imc;
  InversionMode inversion = InversionMode::Analytic;
  HafimcParams control;    ///< IMC and Fx-LMS parameters, control rate in control.imc.sample_rate
  PidGains pid;
  DisturbanceSpec disturbance;
  TransmissionPath cable;
  std::vector<StepCommand> steps;
  StateVector initial;
  double duration = 10.0;  ///< s
  int plant_substeps = 5;
  std::string network_path;                ///< used by InversionMode::Learned when `network` is null
  std::shared_ptr<const RbfNetwork> network;

  double control_rate() const { return control.imc.sample_rate; }
  void validate() const;  ///< throws ConfigError
};

enum class RunStatus { Ok, Collision, Divergence };
std::string to_string(RunStatus s);

/// Time series at the control rate; row k is sampled at time k / rate.
struct ScenarioResult {
  std::string hash;
  RunStatus status = RunStatus::Ok;
  std::string message;
  double sample_rate = 2000.0;
  std::vector<Tone> tones;
  std::vector<StepCommand> steps;
  int axis = 0;
  Eigen::VectorXd time;
  Eigen::MatrixXd stator_accel;   ///< n x 6
  Eigen::MatrixXd floater_accel;  ///< n x 6, absolute
  Eigen::MatrixXd relative_pose;  ///< n x 6
  Eigen::MatrixXd reference;      ///< n x 6, commanded steps
  Eigen::MatrixXd ideal;          ///< n x 6, the steps through the controller and exact 1/s^2 channels
  Eigen::MatrixXd command;        ///< n x 6, acceleration sent to the inversion
  Eigen::MatrixXd feedforward;    ///< n x 6
  Eigen::MatrixXd forces;         ///< n x 8

  Eigen::Index size() const { return time.size(); }
};

/// Closed-loop run: plant substeps at control_rate * plant_substeps, the
/// controller at control_rate. Stroke violation ends the run with status
/// Collision and the partial series. Throws ConfigError or
/// MissingArtifactError for configuration problems.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// FNV-1a of the canonical scenario JSON.
std::string scenario_hash(const ScenarioConfig& config);

nlohmann::json scenario_to_json(const ScenarioConfig& config);
/// Missing fields take the defaults of `base`.
ScenarioConfig scenario_from_json(const nlohmann::json& j, const ScenarioConfig& base = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Runs independent scenarios on up to `threads` workers. Results are
/// returned ordered by scenario hash, then input index.
std::vector<ScenarioResult> run_sweep(const std::vector<ScenarioConfig>& configs, int threads);

/// Five-kilogram point payload away from the floater centre.
PlatformParams payload_platform(const PlatformParams& base = default_platform());

/// Ideal reference: the scenario's tracking controller (PID or IMC) driving
/// an exact 1/s^2 channel with zero-order hold, for a step of `size` at
/// t = 0. One value per control tick.
Eigen::VectorXd ideal_step_response(const ScenarioConfig& config, double size, double duration);

struct CascadeReport {
  ScenarioResult result;
  Eigen::VectorXd ideal;       ///< reference trajectory of the stepped channel
  double tracking_rmse = 0.0;  ///< RMSE against `ideal`, divided by |size|
  double cross_coupling = 0.0; ///< max off-channel excursion / |size|
};

/// Steps `channel` by `size` at t = 0 under the scenario's tracking
/// controller (PID or IMC) and inversion, and compares with the ideal
/// double-integrator response under the same controller. A run that ends
/// early keeps its status in `result`; the figures cover the partial series.
CascadeReport learned_inverse_cascade(const ScenarioConfig& base, int channel, double size,
                                      double duration = 2.0);

}  // namespace mvip
