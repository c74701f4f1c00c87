#include "mvip/platform_io.hpp"

#include <fstream>

#include "mvip/errors.hpp"

namespace mvip {
namespace {

template <int N>
Eigen::Matrix<double, N, 1> read_vector(const nlohmann::json& j, const char* key) {
  const auto& arr = j.at(key);
  if (!arr.is_array() || arr.size() != static_cast<std::size_t>(N)) {
    throw ConfigError(std::string("platform: '") + key + "' must have " + std::to_string(N) +
                      " entries");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v[i] = arr[i].get<double>();
  return v;
}

Matrix6 read_matrix6(const nlohmann::json& j, const char* key) {
  Matrix6 m = Matrix6::Zero();
  if (!j.contains(key)) return m;
  const auto& rows = j.at(key);
  if (!rows.is_array() || rows.size() != 6) {
    throw ConfigError(std::string("platform: residual '") + key + "' must be 6x6");
  }
  for (int r = 0; r < 6; ++r) {
    if (!rows[r].is_array() || rows[r].size() != 6) {
      throw ConfigError(std::string("platform: residual '") + key + "' must be 6x6");
    }
    for (int c = 0; c < 6; ++c) m(r, c) = rows[r][c].get<double>();
  }
  return m;
}

template <typename V>
nlohmann::json to_array(const V& v) {
  auto arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

nlohmann::json matrix_to_json(const Matrix6& m) {
  auto rows = nlohmann::json::array();
  for (int r = 0; r < 6; ++r) rows.push_back(to_array(Vector6(m.row(r).transpose())));
  return rows;
}

}  // namespace

PlatformParams platform_from_json(const nlohmann::json& j) {
  PlatformParams p = default_platform();
  try {
    p.mass = j.at("mass").get<double>();
    p.inertia = read_vector<3>(j, "inertia");
    p.com_shift = j.contains("com_shift") ? read_vector<3>(j, "com_shift") : Vector3::Zero();

    const auto& acts = j.at("actuators");
    if (!acts.is_array() || acts.size() != kActuatorCount) {
      throw ConfigError("platform: 'actuators' must have exactly 8 entries");
    }
    for (int i = 0; i < kActuatorCount; ++i) {
      p.actuators[i] = {acts[i].at("x").get<double>(), acts[i].at("y").get<double>()};
    }
    const auto& stiff = j.at("stiffness");
    if (!stiff.is_array() || stiff.size() != kActuatorCount) {
      throw ConfigError("platform: 'stiffness' must have exactly 8 entries");
    }
    for (int i = 0; i < kActuatorCount; ++i) {
      p.stiffness[i] = {stiff[i].at("k1").get<double>(), stiff[i].at("k2").get<double>(),
                        stiff[i].at("k3").get<double>()};
    }
    if (j.contains("residual") && !j.at("residual").is_null()) {
      const auto& r = j.at("residual");
      ResidualModel model;
      model.amplitude = read_vector<6>(r, "amplitude");
      model.linear = read_matrix6(r, "linear");
      model.quadratic = read_matrix6(r, "quadratic");
      p.residual = model;
    }
    p.gravity = j.value("gravity", false);
    p.omega_products = j.value("omega_products", false);
    p.gravity_accel = j.value("gravity_accel", 9.81);
    if (j.contains("stroke")) p.stroke = read_vector<6>(j, "stroke");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("platform: ") + e.what());
  }
  p.validate();
  return p;
}

nlohmann::json platform_to_json(const PlatformParams& p) {
  nlohmann::json j;
  j["mass"] = p.mass;
  j["inertia"] = to_array(p.inertia);
  j["com_shift"] = to_array(p.com_shift);
  j["actuators"] = nlohmann::json::array();
  j["stiffness"] = nlohmann::json::array();
  for (int i = 0; i < kActuatorCount; ++i) {
    j["actuators"].push_back({{"x", p.actuators[i].x}, {"y", p.actuators[i].y}});
    j["stiffness"].push_back(
        {{"k1", p.stiffness[i].k1}, {"k2", p.stiffness[i].k2}, {"k3", p.stiffness[i].k3}});
  }
  if (p.residual) {
    j["residual"] = {{"amplitude", to_array(p.residual->amplitude)},
                     {"linear", matrix_to_json(p.residual->linear)},
                     {"quadratic", matrix_to_json(p.residual->quadratic)}};
  }
  j["gravity"] = p.gravity;
  j["omega_products"] = p.omega_products;
  j["gravity_accel"] = p.gravity_accel;
  j["stroke"] = to_array(p.stroke);
  return j;
}

PlatformParams load_platform(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw MissingArtifactError("platform file not found: " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("platform file " + path.string() + ": " + e.what());
  }
  return platform_from_json(j);
}

}  // namespace mvip
