#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mvip/allocation.hpp"
#include "mvip/dataset.hpp"
#include "mvip/errcor.hpp"
#include "mvip/errors.hpp"
#include "mvip/hash.hpp"
#include "mvip/inversion.hpp"
#include "mvip/metrics.hpp"
#include "mvip/platform_io.hpp"
#include "mvip/scenario.hpp"

#ifndef MVIP_VERSION
#define MVIP_VERSION "0.0.0"
#endif

namespace mvip::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<double> duration;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--config", o.config, "JSON configuration file");
  app->add_option("--seed", o.seed, "random seed");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--duration", o.duration, "simulated duration in seconds")
      ->check(CLI::PositiveNumber);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json read_json(const fs::path& path) {
  if (!fs::exists(path)) throw MissingArtifactError("file not found: " + path.string());
  std::ifstream in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + " is not valid JSON: " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

/// Platform entries given as a path are replaced by the file contents,
/// resolved against the directory of the referencing config.
void inline_platforms(json& j, const fs::path& base_dir) {
  for (const char* key : {"platform", "nominal"}) {
    if (j.contains(key) && j.at(key).is_string()) {
      fs::path p = j.at(key).get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      j[key] = read_json(p);
    }
  }
}

/// Built-in defaults patched by the config file (RFC 7386 merge; null removes a key).
json load_config(const CommonOptions& o, json defaults) {
  if (!o.config.empty()) {
    json file = read_json(o.config);
    if (!file.is_object()) throw ConfigError(o.config + ": top level must be an object");
    inline_platforms(file, fs::path(o.config).parent_path());
    defaults.merge_patch(file);
  }
  return defaults;
}

fs::path output_dir(const CommonOptions& o, const std::string& command, const std::string& hash) {
  fs::path p = o.out.empty() ? fs::path("runs") / (command + "-" + hash) : fs::path(o.out);
  if (p.is_relative()) {
    if (const char* root = std::getenv(kOutputRootEnv); root != nullptr && *root != '\0') {
      p = fs::path(root) / p;
    }
  }
  return p;
}

struct Manifest {
  fs::path dir;
  std::string hash;

  json reference() const { return {{"file", "manifest.json"}, {"config_hash", hash}}; }
};

Manifest write_manifest(const CommonOptions& o, const std::string& command, std::uint64_t seed,
                        const json& resolved) {
  const std::string hash = hex_digest(fnv1a(resolved.dump()));
  const fs::path dir = output_dir(o, command, hash);
  fs::create_directories(dir);
  json m;
  m["schema"] = "mvip.manifest/1";
  m["command"] = command;
  m["config_path"] = o.config;
  m["seed"] = seed;
  m["output_dir"] = dir.generic_string();
  m["tool_version"] = MVIP_VERSION;
  m["config_hash"] = hash;
  m["config"] = resolved;
  write_json(dir / "manifest.json", m);
  return {dir, hash};
}

json payload_json() {
  const PlatformParams bare = default_platform();
  const PlatformParams p = payload_platform(bare);
  const double added = p.mass - bare.mass;
  const Vector3 offset = (p.com_shift * p.mass - bare.com_shift * bare.mass) / added;
  return {{"mass", added}, {"offset", {offset.x(), offset.y(), offset.z()}}};
}

// ---------------------------------------------------------------- collect

Vector6 vec6(const json& j, const char* what) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 6) throw ConfigError(std::string(what) + " must have 6 entries");
  return Eigen::Map<const Vector6>(v.data());
}

std::vector<double> to_std(const Vector6& v) { return {v.data(), v.data() + 6}; }

json collect_defaults() {
  const CollectConfig c;
  const auto& e = c.excitation;
  return {{"payload", payload_json()},
          {"excitation",
           {{"kind", to_string(e.kind)},
            {"f_l", e.f_l},
            {"f_h", e.f_h},
            {"amplitude", to_std(e.amplitude)},
            {"limit", to_std(e.limit)}}},
          {"pid", {{"kp", c.pid.kp}, {"ki", c.pid.ki}, {"kd", c.pid.kd}}},
          {"duration", c.duration},
          {"record_rate", c.record_rate},
          {"control_rate", c.control_rate},
          {"plant_substeps", c.plant_substeps},
          {"accel_noise", c.accel_noise},
          {"train_fraction", 2.0 / 3.0},
          {"seed", 1}};
}

CollectConfig collect_from_json(const json& j) {
  CollectConfig c;
  try {
    if (j.contains("platform")) c.plant = platform_from_json(j.at("platform"));
    if (j.contains("nominal")) c.nominal = platform_from_json(j.at("nominal"));
    if (j.contains("payload")) {
      const auto& p = j.at("payload");
      const auto off = p.at("offset").get<std::vector<double>>();
      if (off.size() != 3) throw ConfigError("collect: payload offset must have 3 entries");
      c.plant = with_payload(c.plant, p.at("mass").get<double>(), Vector3(off[0], off[1], off[2]));
    }
    const auto& e = j.at("excitation");
    c.excitation.kind = excitation_from_string(e.at("kind").get<std::string>());
    c.excitation.f_l = e.at("f_l").get<double>();
    c.excitation.f_h = e.at("f_h").get<double>();
    c.excitation.amplitude = vec6(e.at("amplitude"), "excitation.amplitude");
    c.excitation.limit = vec6(e.at("limit"), "excitation.limit");
    const auto& k = j.at("pid");
    c.pid = {k.at("kp").get<double>(), k.at("ki").get<double>(), k.at("kd").get<double>()};
    c.duration = j.at("duration").get<double>();
    c.record_rate = j.at("record_rate").get<double>();
    c.control_rate = j.at("control_rate").get<double>();
    c.plant_substeps = j.at("plant_substeps").get<int>();
    c.accel_noise = j.at("accel_noise").get<double>();
    c.excitation.sample_rate = c.control_rate;
    const auto seed = j.at("seed").get<std::uint64_t>();
    c.excitation.seed = seed;
    c.noise_seed = seed ^ 0x9e3779b97f4a7c15ULL;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("collect config: ") + e.what());
  }
  return c;
}

int cmd_collect(const CommonOptions& o, const std::optional<std::string>& excitation,
                std::ostream& out) {
  json cfg = load_config(o, collect_defaults());
  if (o.seed) cfg["seed"] = *o.seed;
  if (o.duration) cfg["duration"] = *o.duration;
  if (excitation) cfg["excitation"]["kind"] = *excitation;
  const CollectConfig cc = collect_from_json(cfg);
  const double fraction = cfg.at("train_fraction").get<double>();
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError("collect: train_fraction must lie in (0, 1)");
  }
  cfg["platform"] = platform_to_json(cc.plant);
  cfg["nominal"] = platform_to_json(cc.nominal);
  cfg.erase("payload");

  const Manifest m = write_manifest(o, "collect", cfg.at("seed").get<std::uint64_t>(), cfg);
  const TrainingDataset data = collect_dataset(cc);
  const auto [train, validation] = split_dataset(data, fraction);
  const DatasetNormalization norm = fit_normalization(train);
  write_dataset_csv(train, m.dir / "train.csv");
  write_dataset_csv(validation, m.dir / "validation.csv");
  write_json(m.dir / "normalization.json", {{"schema", "mvip.normalization/1"},
                                            {"manifest", m.reference()},
                                            {"input", normalization_to_json(norm.input)},
                                            {"output", normalization_to_json(norm.output)}});
  out << "collected " << data.size() << " samples (" << train.size() << " train, "
      << validation.size() << " validation) into " << m.dir.generic_string() << "\n";
  return kOk;
}

// ------------------------------------------------------------------ train

struct TrainOverrides {
  std::string data;
  std::optional<double> desired_rmse;
  std::optional<int> max_neurons;
  std::optional<int> max_iterations;
};

json train_defaults() {
  const TrainingConfig t;
  return {{"data", ""},
          {"seed", 1},
          {"training",
           {{"max_iterations", t.max_iterations},
            {"desired_rmse", t.desired_rmse},
            {"max_neurons", t.max_neurons},
            {"mu_initial", t.mu_initial},
            {"mu_factor", t.mu_factor},
            {"mu_max", t.mu_max},
            {"min_radius", t.min_radius},
            {"progress_factor", t.progress_factor}}}};
}

TrainingConfig training_from_json(const json& j) {
  TrainingConfig t;
  try {
    t.max_iterations = j.at("max_iterations").get<int>();
    t.desired_rmse = j.at("desired_rmse").get<double>();
    t.max_neurons = j.at("max_neurons").get<int>();
    t.mu_initial = j.at("mu_initial").get<double>();
    t.mu_factor = j.at("mu_factor").get<double>();
    t.mu_max = j.at("mu_max").get<double>();
    t.min_radius = j.at("min_radius").get<double>();
    t.progress_factor = j.at("progress_factor").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("training config: ") + e.what());
  }
  t.validate();
  return t;
}

int cmd_train(const CommonOptions& o, const TrainOverrides& ov, std::ostream& out) {
  json cfg = load_config(o, train_defaults());
  if (o.seed) cfg["seed"] = *o.seed;
  if (!ov.data.empty()) cfg["data"] = ov.data;
  if (o.duration) cfg["duration"] = *o.duration;
  auto& tj = cfg["training"];
  if (ov.desired_rmse) tj["desired_rmse"] = *ov.desired_rmse;
  if (ov.max_neurons) tj["max_neurons"] = *ov.max_neurons;
  if (ov.max_iterations) tj["max_iterations"] = *ov.max_iterations;
  const TrainingConfig tc = training_from_json(tj);

  const fs::path data_dir = cfg.at("data").get<std::string>();
  if (data_dir.empty()) throw ConfigError("train: no dataset directory (--data)");
  TrainingDataset train = read_dataset_csv(data_dir / "train.csv");
  const TrainingDataset validation = read_dataset_csv(data_dir / "validation.csv");
  const json nj = read_json(data_dir / "normalization.json");
  DatasetNormalization norm;
  try {
    norm.input = normalization_from_json(nj.at("input"));
    norm.output = normalization_from_json(nj.at("output"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("normalization.json: ") + e.what());
  }
  if (cfg.contains("duration")) {
    const double limit = cfg.at("duration").get<double>();
    const auto n = std::min<Eigen::Index>(
        train.size(), static_cast<Eigen::Index>(std::llround(limit / train.sample_period)));
    train = train.slice(0, n);
  }
  cfg["dataset_digest"] = hex_digest(fnv1a(nj.dump()));

  const Manifest m = write_manifest(o, "train", cfg.at("seed").get<std::uint64_t>(), cfg);
  const TrainingDataset train_n = apply_normalization(train, norm);
  const TrainingResult res = errcor_train(train_n.inputs, train_n.targets, tc);
  RbfNetwork net = res.network;
  net.input_norm = norm.input;
  net.output_norm = norm.output;
  save_network(net, m.dir / "network.json");

  const double train_rmse = rmse(net, train.inputs, train.targets);
  const double validation_rmse = rmse(net, validation.inputs, validation.targets);
  json report;
  report["manifest"] = m.reference();
  report["excitation"] = to_string(train.excitation);
  report["train_samples"] = train.size();
  report["validation_samples"] = validation.size();
  report["desired_rmse"] = tc.desired_rmse;
  report["neurons"] = net.neurons();
  report["train_rmse"] = train_rmse;
  report["validation_rmse"] = validation_rmse;
  report["overfitting"] = validation_rmse > 3.0 * train_rmse;
  report["converged"] = res.converged;
  report["stalled"] = res.stalled;
  report["inner_iterations"] = res.inner_iterations;
  report["best_history"] = res.best_history;
  write_json(m.dir / "report.json", report);
  out << "trained " << net.neurons() << " neurons, train rmse " << num(train_rmse)
      << ", validation rmse " << num(validation_rmse) << " -> " << m.dir.generic_string()
      << "\n";
  return kOk;
}

// -------------------------------------------------------------------- run

struct RunOverrides {
  std::string mode;
  std::string network;
  std::optional<std::string> controller;
  std::optional<std::string> inversion;
  int channel = 0;
  double step_fraction = 0.2;
  int threads = 2;
};

json composite_disturbance() {
  return {{"random_level", 1e-6},
          {"tones",
           {{{"frequency", 5.0}, {"amplitude", 0.05}},
            {{"frequency", 50.0}, {"amplitude", 0.05}},
            {{"frequency", 200.0}, {"amplitude", 0.05}}}}};
}

json run_defaults(const std::string& mode) {
  if (mode == "decoupling" || mode == "cascade") {
    json j = {{"name", mode},
              {"payload", payload_json()},
              {"controller", "pid"},
              {"inversion", mode == "cascade" ? "learned" : "analytic"},
              {"cable", {{"enabled", false}}},
              {"duration", mode == "cascade" ? 2.0 : 6.0}};
    if (mode == "decoupling") {
      j["steps"] = {{{"channel", 0}, {"time", 2.0}, {"size", 0.02}},
                    {{"channel", 1}, {"time", 4.0}, {"size", 0.02}}};
    }
    return j;
  }
  return {{"name", mode},
          {"controller", mode == "hafimc" ? "hafimc" : "imc"},
          {"inversion", "analytic"},
          {"disturbance", composite_disturbance()},
          {"duration", 20.0}};
}

void write_scenario_outputs(const ScenarioResult& r, const Manifest& m, const std::string& stem) {
  write_result_csv(r, m.dir / ("result_" + stem + ".csv"));
  json metrics = metrics_json(r);
  metrics["manifest"] = m.reference();
  metrics["csv"] = "result_" + stem + ".csv";
  write_json(m.dir / ("metrics_" + stem + ".json"), metrics);
}

int status_code(const ScenarioResult& r, std::ostream& err) {
  if (r.status == RunStatus::Ok) return kOk;
  err << "scenario " << r.hash << ": " << to_string(r.status) << ": " << r.message << "\n";
  return kRuntimeError;
}

int cmd_run(const CommonOptions& o, const RunOverrides& ov, std::ostream& out,
            std::ostream& err) {
  json cfg = load_config(o, run_defaults(ov.mode));
  if (o.duration) cfg["duration"] = *o.duration;
  if (o.seed) cfg["disturbance"]["seed"] = *o.seed;
  if (ov.controller) cfg["controller"] = *ov.controller;
  if (ov.inversion) cfg["inversion"] = *ov.inversion;
  if (!ov.network.empty()) cfg["network"] = ov.network;

  ScenarioConfig base = scenario_from_json(cfg);
  if (base.inversion == InversionMode::Learned || ov.mode == "cascade") {
    if (base.network_path.empty()) {
      throw MissingArtifactError("learned inversion needs a network file (--network)");
    }
    base.network = std::make_shared<const RbfNetwork>(load_network(base.network_path));
    if (ov.mode == "cascade") base.inversion = InversionMode::Learned;
  }
  const json resolved = scenario_to_json(base);
  const Manifest m = write_manifest(o, "run-" + ov.mode, base.disturbance.seed, resolved);

  if (ov.mode == "imc" || ov.mode == "hafimc") {
    const ScenarioResult r = run_scenario(base);
    write_scenario_outputs(r, m, ov.mode);
    out << ov.mode << ": " << to_string(r.status) << " -> " << m.dir.generic_string() << "\n";
    return status_code(r, err);
  }

  if (ov.mode == "compare") {
    ScenarioConfig imc = base;
    imc.controller = ControllerMode::Imc;
    imc.name = base.name + "-imc";
    ScenarioConfig haf = base;
    haf.controller = ControllerMode::Hafimc;
    haf.name = base.name + "-hafimc";
    std::vector<ScenarioResult> rs = run_sweep({imc, haf}, ov.threads);
    const std::string imc_hash = scenario_hash(imc);
    const ScenarioResult& ri = rs[0].hash == imc_hash ? rs[0] : rs[1];
    const ScenarioResult& rh = rs[0].hash == imc_hash ? rs[1] : rs[0];
    write_scenario_outputs(ri, m, "imc");
    write_scenario_outputs(rh, m, "hafimc");
    int code = std::max(status_code(ri, err), status_code(rh, err));
    std::ostringstream table;
    table << "frequency_hz,imc_db,hafimc_db,improvement_db\n";
    json cells = json::array();
    if (code == kOk) {
      for (const auto& t : base.disturbance.tones) {
        const double a = attenuation_db(ri, t.frequency);
        const double b = attenuation_db(rh, t.frequency);
        table << num(t.frequency) << "," << num(a) << "," << num(b) << "," << num(a - b) << "\n";
        cells.push_back({{"frequency", t.frequency}, {"imc_db", a}, {"hafimc_db", b}});
      }
    }
    write_text(m.dir / "compare.csv", table.str());
    write_json(m.dir / "compare.json", {{"manifest", m.reference()}, {"cells", cells}});
    out << table.str();
    return code;
  }

  if (ov.mode == "decoupling") {
    std::vector<InversionMode> variants{InversionMode::None};
    if (base.inversion != InversionMode::None) variants.push_back(base.inversion);
    json summary = {{"manifest", m.reference()}};
    int code = kOk;
    for (InversionMode inv : variants) {
      ScenarioConfig c = base;
      c.inversion = inv;
      const ScenarioResult r = run_scenario(c);
      write_scenario_outputs(r, m, to_string(inv));
      summary["cross_coupling"][to_string(inv)] = cross_coupling(r);
      summary["status"][to_string(inv)] = to_string(r.status);
      code = std::max(code, status_code(r, err));
      out << "decoupling " << to_string(inv) << ": cross-coupling " << num(cross_coupling(r))
          << "\n";
    }
    write_json(m.dir / "decoupling.json", summary);
    return code;
  }

  // cascade: step of `step_fraction` of the half-range the network was trained on.
  if (ov.channel < 0 || ov.channel >= kChannelCount) {
    throw ConfigError("cascade: channel must lie in 0..5");
  }
  const Normalization& in = base.network->input_norm;
  const double half = in.empty() ? 1.0 : 0.5 * (in.max[ov.channel] - in.min[ov.channel]);
  const double size = ov.step_fraction * half;
  const CascadeReport rep = learned_inverse_cascade(base, ov.channel, size, base.duration);
  std::ostringstream csv;
  csv << "time,ideal,x,y,z,rx,ry,rz\n";
  const auto& r = rep.result;
  for (Eigen::Index k = 0; k < r.size(); ++k) {
    csv << num(r.time[k]) << "," << num(rep.ideal[k]);
    for (int i = 0; i < kChannelCount; ++i) csv << "," << num(r.relative_pose(k, i));
    csv << "\n";
  }
  write_text(m.dir / "cascade.csv", csv.str());
  write_json(m.dir / "cascade.json", {{"manifest", m.reference()},
                                      {"channel", ov.channel},
                                      {"size", size},
                                      {"tracking_rmse", rep.tracking_rmse},
                                      {"cross_coupling", rep.cross_coupling},
                                      {"status", to_string(r.status)}});
  out << "cascade channel " << ov.channel << " step " << num(size) << ": tracking rmse "
      << num(rep.tracking_rmse) << ", cross-coupling " << num(rep.cross_coupling) << "\n";
  return status_code(r, err);
}

// ---------------------------------------------------------- check commands

PlatformParams platform_for_check(const CommonOptions& o, double payload_mass,
                                  const std::vector<double>& payload_offset) {
  PlatformParams p = o.config.empty() ? default_platform() : load_platform(o.config);
  if (payload_mass > 0.0) {
    if (payload_offset.size() != 3) throw ConfigError("--payload-offset needs 3 values");
    p = with_payload(p, payload_mass, Vector3(payload_offset[0], payload_offset[1],
                                              payload_offset[2]));
  }
  p.validate();
  return p;
}

int cmd_allocate_check(const PlatformParams& p, const std::vector<double>& wrench,
                       const std::vector<double>& pose, std::ostream& out) {
  if (wrench.size() != 6) throw ConfigError("--wrench needs 6 values");
  if (pose.size() != 6) throw ConfigError("--pose needs 6 values");
  const Vector6 w = Eigen::Map<const Vector6>(wrench.data());
  const Vector6 x = Eigen::Map<const Vector6>(pose.data());
  const Matrix68 map = actuation_map(p);
  const auto coils = coil_positions(x, p);
  const Vector8 q = stiffness_at(coils, p);
  const ActuationVector f = allocate(Wrench::from_vector(w), q, map);
  const auto driven = forces_to_currents(f, coils, p);
  const Vector6 residual = map * f.forces - w;
  out << "name,value\n";
  for (int i = 0; i < kActuatorCount; ++i) out << "f" << i + 1 << "," << num(f.forces[i]) << "\n";
  for (int i = 0; i < kActuatorCount; ++i) {
    out << "I" << i + 1 << "," << num(driven[i].current) << "\n";
  }
  static const char* names[] = {"fx", "fy", "fz", "tx", "ty", "tz"};
  for (int i = 0; i < 6; ++i) out << "residual_" << names[i] << "," << num(residual[i]) << "\n";
  out << "residual_norm," << num(residual.norm()) << "\n";
  out << "cost," << num(allocation_cost(f.forces, q)) << "\n";
  return kOk;
}

int cmd_invert_check(const PlatformParams& p, std::ostream& out) {
  const InversionReport rep = jacobian(p);
  out << "jacobian\n";
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) out << (c ? "," : "") << num(rep.jacobian(r, c));
    out << "\n";
  }
  out << "determinant," << num(rep.determinant) << "\n";
  out << "closed_form," << num(rep.closed_form) << "\n";
  out << "difference," << num(rep.determinant - rep.closed_form) << "\n";
  out << "relative_difference,"
      << num(std::abs(rep.determinant - rep.closed_form) / std::abs(rep.closed_form)) << "\n";
  out << "invertible," << (rep.invertible ? "true" : "false") << "\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maglev vibration isolation toolkit", "mvip"};
  app.set_version_flag("--version", MVIP_VERSION);
  app.require_subcommand(1);

  CommonOptions common;

  auto* collect = app.add_subcommand("collect", "closed-loop excitation run and dataset split");
  add_common(collect, common);
  std::optional<std::string> excitation;
  collect->add_option("--excitation", excitation, "rgs or sine_sweep")
      ->check(CLI::IsMember({"rgs", "sine_sweep"}));

  auto* train = app.add_subcommand("train", "error-correction RBF training");
  add_common(train, common);
  TrainOverrides tov;
  train->add_option("--data", tov.data, "directory holding train.csv and validation.csv");
  train->add_option("--desired-rmse", tov.desired_rmse, "target RMSE e_d");
  train->add_option("--max-neurons", tov.max_neurons, "neuron cap N");
  train->add_option("--max-iterations", tov.max_iterations, "updates per neuron S");

  auto* runc = app.add_subcommand("run", "closed-loop scenario");
  add_common(runc, common);
  RunOverrides rov;
  runc->add_option("mode", rov.mode, "decoupling | imc | hafimc | compare | cascade")
      ->required()
      ->check(CLI::IsMember({"decoupling", "imc", "hafimc", "compare", "cascade"}));
  runc->add_option("--network", rov.network, "network JSON for learned inversion");
  runc->add_option("--controller", rov.controller, "off | pid | imc | hafimc");
  runc->add_option("--inversion", rov.inversion, "none | analytic | learned");
  runc->add_option("--channel", rov.channel, "cascade: stepped channel 0..5");
  runc->add_option("--step-fraction", rov.step_fraction,
                   "cascade: step as a fraction of the trained half-range");
  runc->add_option("--threads", rov.threads, "compare: worker threads")
      ->check(CLI::PositiveNumber);

  double payload_mass = 0.0;
  std::vector<double> payload_offset{0.0, 0.0, 0.0};
  auto* alloc = app.add_subcommand("allocate-check", "print optimal actuator forces as CSV");
  add_common(alloc, common);
  std::vector<double> wrench;
  std::vector<double> pose(6, 0.0);
  alloc->add_option("--wrench", wrench, "fx fy fz tx ty tz")->required()->expected(6);
  alloc->add_option("--pose", pose, "relative pose x y z rx ry rz")->expected(6);
  alloc->add_option("--payload-mass", payload_mass, "kg");
  alloc->add_option("--payload-offset", payload_offset, "m")->expected(3);

  auto* inv = app.add_subcommand("invert-check", "print the Jacobian and its determinant");
  add_common(inv, common);
  inv->add_option("--payload-mass", payload_mass, "kg");
  inv->add_option("--payload-offset", payload_offset, "m")->expected(3);

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << MVIP_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "mvip: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (collect->parsed()) return cmd_collect(common, excitation, out);
    if (train->parsed()) return cmd_train(common, tov, out);
    if (runc->parsed()) return cmd_run(common, rov, out, err);
    if (alloc->parsed()) {
      return cmd_allocate_check(platform_for_check(common, payload_mass, payload_offset), wrench,
                                pose, out);
    }
    return cmd_invert_check(platform_for_check(common, payload_mass, payload_offset), out);
  } catch (const MissingArtifactError& e) {
    err << "mvip: missing artifact: " << e.what() << "\n";
    return kMissingArtifact;
  } catch (const ConfigError& e) {
    err << "mvip: configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "mvip: " << e.what() << "\n";
    return kRuntimeError;
  } catch (const std::exception& e) {
    err << "mvip: " << e.what() << "\n";
    return kRuntimeError;
  }
}

}  // namespace mvip::cli
