#include "mvip/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

#include "mvip/allocation.hpp"
#include "mvip/errors.hpp"
#include "mvip/hash.hpp"
#include "mvip/inversion.hpp"
#include "mvip/platform_io.hpp"

namespace mvip {
namespace {

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

std::string lms_norm_name(LmsNormalization n) {
  return n == LmsNormalization::MeanPower ? "mean_power" : "sum_of_squares";
}

LmsNormalization lms_norm_from(const std::string& s) {
  if (s == "mean_power") return LmsNormalization::MeanPower;
  if (s == "sum_of_squares") return LmsNormalization::SumOfSquares;
  throw ConfigError("unknown fxlms normalization '" + s + "'");
}

Vector6 step_reference(const std::vector<StepCommand>& steps, double t) {
  Vector6 r = Vector6::Zero();
  for (const auto& s : steps) {
    if (t >= s.time) r[s.channel] += s.size;
  }
  return r;
}

}  // namespace

std::string to_string(ControllerMode m) {
  switch (m) {
    case ControllerMode::Off: return "off";
    case ControllerMode::Pid: return "pid";
    case ControllerMode::Imc: return "imc";
    case ControllerMode::Hafimc: return "hafimc";
  }
  return "off";
}

std::string to_string(InversionMode m) {
  switch (m) {
    case InversionMode::None: return "none";
    case InversionMode::Analytic: return "analytic";
    case InversionMode::Learned: return "learned";
  }
  return "none";
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return "ok";
    case RunStatus::Collision: return "collision";
    case RunStatus::Divergence: return "divergence";
  }
  return "ok";
}

ControllerMode controller_from_string(const std::string& s) {
  if (s == "off") return ControllerMode::Off;
  if (s == "pid") return ControllerMode::Pid;
  if (s == "imc") return ControllerMode::Imc;
  if (s == "hafimc") return ControllerMode::Hafimc;
  throw ConfigError("unknown controller mode '" + s + "' (off, pid, imc, hafimc)");
}

InversionMode inversion_from_string(const std::string& s) {
  if (s == "none") return InversionMode::None;
  if (s == "analytic") return InversionMode::Analytic;
  if (s == "learned") return InversionMode::Learned;
  throw ConfigError("unknown inversion mode '" + s + "' (none, analytic, learned)");
}

void TransmissionPath::validate() const {
  if (!enabled) return;
  if (!(resonance_hz >= 0.0) || !(damping >= 0.0)) {
    throw ConfigError("cable: resonance and damping must be non-negative");
  }
  if (resonance_hz >= 0.2) throw ConfigError("cable: resonance must lie below 0.2 Hz");
  for (double h : leakage) {
    if (!std::isfinite(h)) throw ConfigError("cable: leakage taps must be finite");
  }
}

void ScenarioConfig::validate() const {
  plant.validate();
  nominal.validate();
  cable.validate();
  if (!(duration > 0.0)) throw ConfigError("scenario: duration must be positive");
  if (plant_substeps < 1) throw ConfigError("scenario: plant_substeps must be >= 1");
  if (!(control_rate() > 0.0)) throw ConfigError("scenario: control rate must be positive");
  for (const auto& s : steps) {
    if (s.channel < 0 || s.channel > 5) throw ConfigError("scenario: step channel must be 0..5");
  }
  if (!initial.all_finite()) throw ConfigError("scenario: initial state must be finite");
}

PlatformParams payload_platform(const PlatformParams& base) {
  return with_payload(base, 5.0, Vector3(0.1, 0.08, 0.05));
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  config.validate();
  const double rate = config.control_rate();
  const int sub = config.plant_substeps;
  const double dt = 1.0 / rate;
  const double h = dt / sub;
  const auto ticks = static_cast<Eigen::Index>(std::llround(config.duration * rate));
  const Matrix68 map = actuation_map(config.plant);

  std::shared_ptr<const RbfNetwork> net = config.network;
  if (config.inversion == InversionMode::Learned && !net) {
    if (config.network_path.empty()) {
      throw MissingArtifactError("learned inversion requires a network file");
    }
    net = std::make_shared<RbfNetwork>(load_network(config.network_path));
  }
  if (net && (net->input_dim != 12 || net->output_dim != 6)) {
    throw ConfigError("learned inversion: network must map 12 inputs to 6 outputs");
  }

  const Eigen::VectorXd base =
      generate_disturbance(config.disturbance, static_cast<double>(ticks) * dt, rate * sub);
  const int axis = config.disturbance.axis;
  auto base_at = [&](Eigen::Index idx) {
    Vector6 a = Vector6::Zero();
    if (idx >= 0 && idx < base.size()) a[axis] = base[idx];
    return a;
  };

  ScenarioResult res;
  res.hash = scenario_hash(config);
  res.sample_rate = rate;
  res.tones = config.disturbance.tones;
  res.steps = config.steps;
  res.axis = axis;
  res.time.resize(ticks);
  for (auto* m : {&res.stator_accel, &res.floater_accel, &res.relative_pose, &res.reference,
                  &res.ideal, &res.command, &res.feedforward}) {
    m->setZero(ticks, 6);
  }
  res.forces.setZero(ticks, 8);
  for (const auto& s : config.steps) {
    const auto k0 = std::min<Eigen::Index>(
        ticks, static_cast<Eigen::Index>(std::ceil(s.time * rate - 1e-9)));
    if (k0 >= ticks) continue;
    Eigen::VectorXd shape;
    if (config.controller == ControllerMode::Off) {
      shape = Eigen::VectorXd::Constant(ticks - k0, s.size);
    } else {
      ScenarioConfig ideal_cfg = config;
      if (config.controller == ControllerMode::Hafimc) ideal_cfg.controller = ControllerMode::Imc;
      shape = ideal_step_response(ideal_cfg, s.size, static_cast<double>(ticks - k0) * dt);
    }
    res.ideal.col(s.channel).segment(k0, ticks - k0) += shape;
  }

  HafimcParams hp = config.control;
  if (config.controller == ControllerMode::Imc) hp.enable_feedforward = false;
  std::unique_ptr<HafimcController> ctrl;
  if (config.controller == ControllerMode::Imc || config.controller == ControllerMode::Hafimc) {
    ctrl = std::make_unique<HafimcController>(hp);
  }

  const double wc = 2.0 * std::numbers::pi * config.cable.resonance_hz;
  const std::vector<double>& leak_taps = config.cable.leakage;
  std::vector<Vector6> stator_hist(std::max<std::size_t>(leak_taps.size(), 1), Vector6::Zero());

  StateVector state = config.initial;
  Vector6 integral = Vector6::Zero();
  Vector6 floater_meas = Vector6::Zero();
  Eigen::Index logged = 0;

  try {
    for (Eigen::Index k = 0; k < ticks; ++k) {
      const double t = static_cast<double>(k) * dt;
      const Vector6 r_d = step_reference(config.steps, t);
      const Vector6 stator = base_at(k * sub);

      Vector6 accel_cmd = Vector6::Zero();
      Vector6 ff = Vector6::Zero();
      switch (config.controller) {
        case ControllerMode::Off: break;
        case ControllerMode::Pid: {
          const Vector6 e = r_d - state.pose;
          integral += e * dt;
          accel_cmd = config.pid.kp * e + config.pid.ki * integral - config.pid.kd * state.rates;
          break;
        }
        case ControllerMode::Imc:
        case ControllerMode::Hafimc: {
          const HafimcOutput out = ctrl->step({stator, floater_meas, state.pose}, r_d);
          accel_cmd = out.command;
          ff = out.feedforward;
          break;
        }
      }

      Wrench wrench;
      switch (config.inversion) {
        case InversionMode::None: wrench = nominal_inverse(accel_cmd, config.nominal); break;
        case InversionMode::Analytic: wrench = analytic_inverse(accel_cmd, config.plant); break;
        case InversionMode::Learned: {
          Eigen::VectorXd x(12);
          x << state.pose, accel_cmd;
          wrench = Wrench::from_vector(rbf_forward(*net, x));
          break;
        }
      }
      const auto driven = drive_actuators(wrench, state.pose, config.plant, map);

      std::rotate(stator_hist.rbegin(), stator_hist.rbegin() + 1, stator_hist.rend());
      stator_hist.front() = stator;
      Vector6 leak = Vector6::Zero();
      if (config.cable.enabled) {
        for (std::size_t i = 0; i < leak_taps.size(); ++i) leak += leak_taps[i] * stator_hist[i];
      }

      res.time[k] = t;
      res.stator_accel.row(k) = stator.transpose();
      res.floater_accel.row(k) = floater_meas.transpose();
      res.relative_pose.row(k) = state.pose.transpose();
      res.reference.row(k) = r_d.transpose();
      res.command.row(k) = accel_cmd.transpose();
      res.feedforward.row(k) = ff.transpose();
      ActuationVector f;
      for (int i = 0; i < kActuatorCount; ++i) {
        f.forces[i] = driven[i].current *
                      current_stiffness(driven[i].y_c, driven[i].z_c, config.plant.stiffness[i]);
      }
      res.forces.row(k) = f.forces.transpose();
      logged = k + 1;

      for (int s = 0; s < sub; ++s) {
        const Vector6 a_b = base_at(k * sub + s);
        Vector6 external = leak - a_b;
        if (config.cable.enabled) {
          external -= wc * wc * state.pose + 2.0 * config.cable.damping * wc * state.rates;
        }
        const Wrench applied = applied_wrench(driven, state.pose, config.plant, map);
        state = step_dynamics(state, applied, config.plant, h, external);
        if (s == sub - 1) {
          floater_meas = accelerations(state, applied, config.plant, external) + a_b;
        }
      }
      if ((state.pose.cwiseAbs().array() > config.plant.stroke.array()).any()) {
        std::ostringstream os;
        os << "collision at t = " << t + dt << " s, pose [" << state.pose.transpose() << "]";
        res.status = RunStatus::Collision;
        res.message = os.str();
        break;
      }
    }
  } catch (const DivergenceError& e) {
    res.status = RunStatus::Divergence;
    res.message = e.what();
  } catch (const StrokeLimitError& e) {
    res.status = RunStatus::Collision;
    res.message = e.what();
  }

  if (logged < ticks) {
    res.time.conservativeResize(logged);
    for (auto* m : {&res.stator_accel, &res.floater_accel, &res.relative_pose, &res.reference,
                    &res.ideal, &res.command, &res.feedforward}) {
      m->conservativeResize(logged, 6);
    }
    res.forces.conservativeResize(logged, 8);
  }
  return res;
}

nlohmann::json scenario_to_json(const ScenarioConfig& c) {
  nlohmann::json j;
  j["name"] = c.name;
  j["duration"] = c.duration;
  j["plant_substeps"] = c.plant_substeps;
  j["controller"] = to_string(c.controller);
  j["inversion"] = to_string(c.inversion);
  j["platform"] = platform_to_json(c.plant);
  j["nominal"] = platform_to_json(c.nominal);
  const auto& hp = c.control;
  j["control"] = {{"f_l", hp.f_l},
                  {"f_h", hp.f_h},
                  {"filter_length", hp.fxlms.filter_length},
                  {"mu", hp.fxlms.mu},
                  {"p", hp.fxlms.p},
                  {"lambda", hp.fxlms.lambda},
                  {"eps1", hp.imc.eps1},
                  {"eps2", hp.imc.eps2},
                  {"sample_rate", hp.imc.sample_rate},
                  {"secondary_path", hp.fxlms.secondary_path},
                  {"normalization", lms_norm_name(hp.fxlms.normalization)},
                  {"enable_imc", hp.enable_imc},
                  {"enable_feedforward", hp.enable_feedforward}};
  j["pid"] = {{"kp", c.pid.kp}, {"ki", c.pid.ki}, {"kd", c.pid.kd}};
  auto tones = nlohmann::json::array();
  for (const auto& t : c.disturbance.tones) {
    tones.push_back({{"frequency", t.frequency}, {"amplitude", t.amplitude}});
  }
  j["disturbance"] = {{"random_level", c.disturbance.random_level},
                      {"band_lo", c.disturbance.band_lo},
                      {"band_hi", c.disturbance.band_hi},
                      {"tones", tones},
                      {"axis", c.disturbance.axis},
                      {"seed", c.disturbance.seed}};
  j["cable"] = {{"enabled", c.cable.enabled},
                {"resonance_hz", c.cable.resonance_hz},
                {"damping", c.cable.damping},
                {"leakage", c.cable.leakage}};
  auto steps = nlohmann::json::array();
  for (const auto& s : c.steps) {
    steps.push_back({{"channel", s.channel}, {"time", s.time}, {"size", s.size}});
  }
  j["steps"] = steps;
  const Vector12 x0 = c.initial.vector();
  j["initial_state"] = std::vector<double>(x0.data(), x0.data() + 12);
  j["network"] = c.network_path;
  if (c.network) j["network_digest"] = hex_digest(fnv1a(network_to_json(*c.network).dump()));
  return j;
}

ScenarioConfig scenario_from_json(const nlohmann::json& j, const ScenarioConfig& base) {
  ScenarioConfig c = base;
  try {
    c.name = get_or<std::string>(j, "name", c.name);
    c.duration = get_or(j, "duration", c.duration);
    c.plant_substeps = get_or(j, "plant_substeps", c.plant_substeps);
    if (j.contains("controller")) c.controller = controller_from_string(j.at("controller"));
    if (j.contains("inversion")) c.inversion = inversion_from_string(j.at("inversion"));
    if (j.contains("platform")) c.plant = platform_from_json(j.at("platform"));
    if (j.contains("nominal")) c.nominal = platform_from_json(j.at("nominal"));
    if (j.contains("payload")) {
      const auto& p = j.at("payload");
      const auto off = p.at("offset").get<std::vector<double>>();
      if (off.size() != 3) throw ConfigError("scenario: payload offset must have 3 entries");
      c.plant = with_payload(c.plant, p.at("mass").get<double>(), Vector3(off[0], off[1], off[2]));
    }
    if (j.contains("control")) {
      const auto& k = j.at("control");
      auto& hp = c.control;
      hp.f_l = get_or(k, "f_l", hp.f_l);
      hp.f_h = get_or(k, "f_h", hp.f_h);
      hp.fxlms.filter_length = get_or(k, "filter_length", hp.fxlms.filter_length);
      hp.fxlms.mu = get_or(k, "mu", hp.fxlms.mu);
      hp.fxlms.p = get_or(k, "p", hp.fxlms.p);
      hp.fxlms.lambda = get_or(k, "lambda", hp.fxlms.lambda);
      hp.imc.eps1 = get_or(k, "eps1", hp.imc.eps1);
      hp.imc.eps2 = get_or(k, "eps2", hp.imc.eps2);
      hp.imc.sample_rate = get_or(k, "sample_rate", hp.imc.sample_rate);
      hp.fxlms.secondary_path = get_or(k, "secondary_path", hp.fxlms.secondary_path);
      if (k.contains("normalization")) hp.fxlms.normalization = lms_norm_from(k.at("normalization"));
      hp.enable_imc = get_or(k, "enable_imc", hp.enable_imc);
      hp.enable_feedforward = get_or(k, "enable_feedforward", hp.enable_feedforward);
    }
    if (j.contains("pid")) {
      const auto& k = j.at("pid");
      c.pid.kp = get_or(k, "kp", c.pid.kp);
      c.pid.ki = get_or(k, "ki", c.pid.ki);
      c.pid.kd = get_or(k, "kd", c.pid.kd);
    }
    if (j.contains("disturbance")) {
      const auto& k = j.at("disturbance");
      auto& d = c.disturbance;
      d.random_level = get_or(k, "random_level", d.random_level);
      d.band_lo = get_or(k, "band_lo", d.band_lo);
      d.band_hi = get_or(k, "band_hi", d.band_hi);
      d.axis = get_or(k, "axis", d.axis);
      d.seed = get_or(k, "seed", d.seed);
      if (k.contains("tones")) {
        d.tones.clear();
        for (const auto& t : k.at("tones")) {
          d.tones.push_back({t.at("frequency").get<double>(), t.at("amplitude").get<double>()});
        }
      }
    }
    if (j.contains("cable")) {
      const auto& k = j.at("cable");
      c.cable.enabled = get_or(k, "enabled", c.cable.enabled);
      c.cable.resonance_hz = get_or(k, "resonance_hz", c.cable.resonance_hz);
      c.cable.damping = get_or(k, "damping", c.cable.damping);
      c.cable.leakage = get_or(k, "leakage", c.cable.leakage);
    }
    if (j.contains("steps")) {
      c.steps.clear();
      for (const auto& s : j.at("steps")) {
        c.steps.push_back({s.at("channel").get<int>(), s.at("time").get<double>(),
                           s.at("size").get<double>()});
      }
    }
    if (j.contains("initial_state")) {
      const auto x = j.at("initial_state").get<std::vector<double>>();
      if (x.size() != 12) throw ConfigError("scenario: initial_state must have 12 entries");
      c.initial = StateVector::from_vector(Eigen::Map<const Vector12>(x.data()));
    }
    c.network_path = get_or<std::string>(j, "network", c.network_path);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario json: ") + e.what());
  }
  c.validate();
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw MissingArtifactError("scenario file not found: " + path.string());
  }
  std::ifstream in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("scenario file " + path.string() + " is not valid JSON: " + e.what());
  }
  return scenario_from_json(j);
}

std::string scenario_hash(const ScenarioConfig& config) {
  return hex_digest(fnv1a(scenario_to_json(config).dump()));
}

std::vector<ScenarioResult> run_sweep(const std::vector<ScenarioConfig>& configs, int threads) {
  std::vector<ScenarioResult> results(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::size_t next = 0;
  std::mutex mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mutex);
        if (next >= configs.size()) return;
        i = next++;
      }
      try {
        results[i] = run_scenario(configs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(configs.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<std::size_t> order(configs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return results[a].hash < results[b].hash;
  });
  std::vector<ScenarioResult> sorted;
  sorted.reserve(results.size());
  for (auto i : order) sorted.push_back(std::move(results[i]));
  return sorted;
}

Eigen::VectorXd ideal_step_response(const ScenarioConfig& config, double size, double duration) {
  if (config.controller != ControllerMode::Pid && config.controller != ControllerMode::Imc) {
    throw ConfigError("ideal response: controller must be pid or imc");
  }
  if (!(config.control_rate() > 0.0)) throw ConfigError("ideal response: invalid control rate");
  const double rate = config.control_rate();
  ImcChannel imc(config.control.imc);
  const double dt = 1.0 / rate;
  const auto ticks = static_cast<Eigen::Index>(std::llround(duration * rate));
  Eigen::VectorXd out(ticks);
  double x = 0.0;
  double v = 0.0;
  double integral = 0.0;
  for (Eigen::Index k = 0; k < ticks; ++k) {
    out[k] = x;
    double a = 0.0;
    if (config.controller == ControllerMode::Imc) {
      a = imc.step(size, x);
    } else {
      integral += (size - x) * dt;
      a = config.pid.kp * (size - x) + config.pid.ki * integral - config.pid.kd * v;
    }
    x += v * dt + 0.5 * a * dt * dt;
    v += a * dt;
  }
  return out;
}

CascadeReport learned_inverse_cascade(const ScenarioConfig& base, int channel, double size,
                                      double duration) {
  if (channel < 0 || channel > 5) throw ConfigError("cascade: channel must be 0..5");
  if (size == 0.0) throw ConfigError("cascade: step size must be nonzero");
  if (base.controller != ControllerMode::Pid && base.controller != ControllerMode::Imc) {
    throw ConfigError("cascade: tracking controller must be pid or imc");
  }
  ScenarioConfig c = base;
  c.steps = {{channel, 0.0, size}};
  c.duration = duration;
  CascadeReport rep;
  rep.result = run_scenario(c);
  rep.ideal = ideal_step_response(c, size, duration).head(rep.result.size());
  if (rep.result.size() == 0) return rep;
  const Eigen::VectorXd actual = rep.result.relative_pose.col(channel);
  rep.tracking_rmse =
      std::sqrt((actual - rep.ideal).squaredNorm() / static_cast<double>(actual.size())) /
      std::abs(size);
  double cross = 0.0;
  for (int i = 0; i < 6; ++i) {
    if (i == channel) continue;
    cross = std::max(cross, rep.result.relative_pose.col(i).cwiseAbs().maxCoeff());
  }
  rep.cross_coupling = cross / std::abs(size);
  return rep;
}

}  // namespace mvip
