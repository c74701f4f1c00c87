#include "mvip/dataset.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "mvip/allocation.hpp"
#include "mvip/errors.hpp"
#include "mvip/inversion.hpp"

namespace mvip {
namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string pose_text(const Vector6& pose) {
  std::ostringstream os;
  os << '[' << pose.transpose() << ']';
  return os.str();
}

}  // namespace

TrainingDataset TrainingDataset::slice(Eigen::Index start, Eigen::Index count) const {
  TrainingDataset out;
  out.time = time.segment(start, count);
  out.inputs = inputs.middleRows(start, count);
  out.targets = targets.middleRows(start, count);
  out.sample_period = sample_period;
  out.excitation = excitation;
  return out;
}

const std::vector<std::string>& dataset_columns() {
  static const std::vector<std::string> cols{
      "time", "x",   "y",   "z",   "rx",  "ry",  "rz",  "ax", "ay", "az",
      "arx",  "ary", "arz", "fx",  "fy",  "fz",  "tx",  "ty", "tz"};
  return cols;
}

TrainingDataset collect_dataset(const CollectConfig& config) {
  config.plant.validate();
  config.nominal.validate();
  if (!(config.duration > 0.0)) throw ConfigError("collect: duration must be positive");
  const double ratio = config.control_rate / config.record_rate;
  const auto decimation = static_cast<long>(std::llround(ratio));
  if (decimation < 1 || std::abs(ratio - static_cast<double>(decimation)) > 1e-9) {
    throw ConfigError("collect: control rate must be an integer multiple of the record rate");
  }
  if (config.plant_substeps < 1) throw ConfigError("collect: plant_substeps must be >= 1");

  ExcitationParams ex = config.excitation;
  ex.sample_rate = config.control_rate;
  const Eigen::MatrixXd command = generate_excitation(ex, config.duration);
  const Eigen::Index ticks = command.rows();
  const double dt = 1.0 / config.control_rate;
  const double h = dt / config.plant_substeps;
  const Matrix68 map = actuation_map(config.plant);

  std::mt19937_64 rng(config.noise_seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  const Eigen::Index samples = (ticks + decimation - 1) / decimation;
  TrainingDataset data;
  data.time.resize(samples);
  data.inputs.resize(samples, 12);
  data.targets.resize(samples, 6);
  data.sample_period = 1.0 / config.record_rate;
  data.excitation = config.excitation.kind;

  StateVector state;
  Vector6 integral = Vector6::Zero();
  Eigen::Index row = 0;
  for (Eigen::Index k = 0; k < ticks; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Vector6 error = command.row(k).transpose() - state.pose;
    integral += error * dt;
    const Vector6 accel_cmd = config.pid.kp * error + config.pid.ki * integral -
                              config.pid.kd * state.rates;
    const Wrench wrench = nominal_inverse(accel_cmd, config.nominal);
    const auto driven = drive_actuators(wrench, state.pose, config.plant, map);

    if (k % decimation == 0) {
      Vector6 accel = accelerations(state, wrench, config.plant);
      if (config.accel_noise > 0.0) {
        for (int i = 0; i < 6; ++i) accel[i] += config.accel_noise * noise(rng);
      }
      data.time[row] = t;
      data.inputs.row(row) << state.pose.transpose(), accel.transpose();
      data.targets.row(row) = wrench.vector().transpose();
      ++row;
    }

    for (int s = 0; s < config.plant_substeps; ++s) {
      const Wrench applied = applied_wrench(driven, state.pose, config.plant, map);
      try {
        state = step_dynamics(state, applied, config.plant, h);
      } catch (const DivergenceError&) {
        throw DivergenceError("collect: state diverged at t = " + format_double(t) +
                              " s, last pose " + pose_text(state.pose));
      }
    }
    if ((state.pose.cwiseAbs().array() > config.plant.stroke.array()).any()) {
      throw CollisionError("collect: stroke exceeded at t = " + format_double(t + dt) +
                           " s, pose " + pose_text(state.pose));
    }
  }
  return data;
}

std::pair<TrainingDataset, TrainingDataset> split_dataset(const TrainingDataset& data,
                                                          double train_fraction) {
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
    throw ConfigError("split: train fraction must lie in (0, 1)");
  }
  const auto n_train =
      static_cast<Eigen::Index>(std::llround(train_fraction * static_cast<double>(data.size())));
  return {data.slice(0, n_train), data.slice(n_train, data.size() - n_train)};
}

DatasetNormalization fit_normalization(const TrainingDataset& data) {
  const auto& cols = dataset_columns();
  const std::vector<std::string> in_names(cols.begin() + 1, cols.begin() + 13);
  const std::vector<std::string> out_names(cols.begin() + 13, cols.end());
  return {Normalization::fit(data.inputs, in_names), Normalization::fit(data.targets, out_names)};
}

TrainingDataset apply_normalization(const TrainingDataset& data, const DatasetNormalization& n) {
  TrainingDataset out = data;
  out.inputs = n.input.apply_rows(data.inputs);
  out.targets = n.output.apply_rows(data.targets);
  return out;
}

TrainingDataset invert_normalization(const TrainingDataset& data, const DatasetNormalization& n) {
  TrainingDataset out = data;
  out.inputs = n.input.invert_rows(data.inputs);
  out.targets = n.output.invert_rows(data.targets);
  return out;
}

void write_dataset_csv(const TrainingDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write dataset file " + path.string());
  out << "# schema: " << kDatasetSchema << " excitation=" << to_string(data.excitation)
      << " sample_period=" << format_double(data.sample_period) << '\n';
  const auto& cols = dataset_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (Eigen::Index r = 0; r < data.size(); ++r) {
    out << format_double(data.time[r]);
    for (Eigen::Index c = 0; c < 12; ++c) out << ',' << format_double(data.inputs(r, c));
    for (Eigen::Index c = 0; c < 6; ++c) out << ',' << format_double(data.targets(r, c));
    out << '\n';
  }
}

TrainingDataset read_dataset_csv(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw MissingArtifactError("dataset file not found: " + path.string());
  }
  std::ifstream in(path);
  std::string line;
  TrainingDataset data;
  if (!std::getline(in, line) || line.rfind(std::string("# schema: ") + kDatasetSchema, 0) != 0) {
    throw ConfigError("dataset " + path.string() + ": missing schema line '" + kDatasetSchema + "'");
  }
  if (auto pos = line.find("excitation="); pos != std::string::npos) {
    std::istringstream is(line.substr(pos + 11));
    std::string kind;
    is >> kind;
    data.excitation = excitation_from_string(kind);
  }
  if (auto pos = line.find("sample_period="); pos != std::string::npos) {
    data.sample_period = std::stod(line.substr(pos + 14));
  }

  if (!std::getline(in, line)) throw ConfigError("dataset " + path.string() + ": missing header");
  std::vector<std::string> header;
  {
    std::istringstream is(line);
    std::string cell;
    while (std::getline(is, cell, ',')) header.push_back(cell);
  }
  const auto& expected = dataset_columns();
  if (header != expected) {
    std::string diff;
    for (std::size_t i = 0; i < std::max(header.size(), expected.size()); ++i) {
      const std::string got = i < header.size() ? header[i] : "<missing>";
      const std::string want = i < expected.size() ? expected[i] : "<none>";
      if (got != want) diff += " column " + std::to_string(i) + ": '" + got + "' (expected '" + want + "');";
    }
    throw ConfigError("dataset " + path.string() + ": header mismatch:" + diff);
  }

  std::vector<std::array<double, 19>> rows;
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::array<double, 19> v{};
    std::istringstream is(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(is, cell, ',')) {
      if (c >= v.size()) break;
      try {
        v[c] = std::stod(cell);
      } catch (const std::exception&) {
        throw ConfigError("dataset " + path.string() + ": bad value in column '" + expected[c] +
                          "' at line " + std::to_string(line_no));
      }
      ++c;
    }
    if (c != v.size()) {
      throw ConfigError("dataset " + path.string() + ": line " + std::to_string(line_no) +
                        " has " + std::to_string(c) + " columns, expected 19");
    }
    rows.push_back(v);
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  data.time.resize(n);
  data.inputs.resize(n, 12);
  data.targets.resize(n, 6);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& v = rows[static_cast<std::size_t>(r)];
    data.time[r] = v[0];
    for (int c = 0; c < 12; ++c) data.inputs(r, c) = v[1 + static_cast<std::size_t>(c)];
    for (int c = 0; c < 6; ++c) data.targets(r, c) = v[13 + static_cast<std::size_t>(c)];
  }
  return data;
}

}  // namespace mvip
