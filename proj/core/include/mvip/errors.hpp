#pragma once

#include <stdexcept>
#include <string>

namespace mvip {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, malformed files, degenerate layouts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Rank-deficient or ill-conditioned allocation / inversion.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Actuator current stiffness too small at the present coil position.
class StrokeLimitError : public Error {
 public:
  using Error::Error;
};

/// Non-finite state or filter weights.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Relative pose left the configured stroke box.
class CollisionError : public Error {
 public:
  using Error::Error;
};

/// A required input file does not exist.
class MissingArtifactError : public Error {
 public:
  using Error::Error;
};

}  // namespace mvip
