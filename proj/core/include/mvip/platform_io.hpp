#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "mvip/plant.hpp"

namespace mvip {

/// Platform JSON: {mass, inertia[3], com_shift[3], actuators[8]{x,y},
/// stiffness[8]{k1,k2,k3}} plus optional residual, gravity, omega_products
/// and stroke[6]. See docs/platform.schema.json.
PlatformParams platform_from_json(const nlohmann::json& j);
nlohmann::json platform_to_json(const PlatformParams& p);
PlatformParams load_platform(const std::filesystem::path& path);

}  // namespace mvip
