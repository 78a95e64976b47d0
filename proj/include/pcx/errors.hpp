#pragma once

#include <stdexcept>
#include <string>

namespace pcx {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

/// Failure of a single model run, tagged with the offending sample (and the
/// step/period where it blew up, when meaningful).
struct SimulationError : Error {
  long sample_index;
  long step_index;
  SimulationError(const std::string& what, long sample, long step = -1)
      : Error(what), sample_index(sample), step_index(step) {}
};

}  // namespace pcx
