#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "mvip/plant.hpp"

namespace mvip::test {

/// Platform with random mass properties and a random CoM shift.
inline PlatformParams random_platform(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PlatformParams p = default_platform();
  p.mass = 5.0 + 45.0 * u(rng);
  p.inertia = Vector3(0.1 + 2.0 * u(rng), 0.1 + 2.0 * u(rng), 0.1 + 2.0 * u(rng));
  p.com_shift = Vector3(0.3 * u(rng) - 0.15, 0.3 * u(rng) - 0.15, 0.3 * u(rng) - 0.15);
  return p;
}

/// Fresh scratch directory under the system temp path.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("mvip_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace mvip::test
