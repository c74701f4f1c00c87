#pragma once

#include <ostream>

namespace mvip::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kRuntimeError = 3,
  kMissingArtifact = 4,
};

/// Environment variable that relocates relative output directories.
inline constexpr const char* kOutputRootEnv = "MVIP_OUTPUT_ROOT";

/// Entry point of the `mvip` tool. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mvip::cli
