#pragma once

#include <Eigen/Core>
#include <array>

#include "pcx/errors.hpp"

namespace pcx::models {

/// Discrete-time model of innovative search in organizations: seven state
/// variables driven by twelve Gaussian parameters c_i = mean_i + std_i theta_i.
/// The equation set is evaluated Gauss-Seidel style per period: attention AA
/// and external stock ES first from old values, then incoming ideas II from
/// the new ES and AA, internal stock IS, new ideas NI = c3 * old IS,
/// organizational ideas OI from the new NI/IS/II, finally testing ideas TI.
/// One reported period equals one internal step shifted by one, so NI stays
/// at its initial value through period 3 and the first analyzed period is 4.
struct InnovationConfig {
  std::array<double, 12> mean = {0.1375, 0.2,    0.5,     0.2,    0.2,     0.5,
                                 0.275,  0.1375, -0.0150, -0.0505, 0.00055, 1.0055};
  std::array<double, 12> stddev = {0.0225, 0.02,   0.06,  0.02,   0.02,    0.02,
                                   0.025,  0.0225, 0.002, 0.0099, 0.00009, 0.0009};
  // x = [II, IS, NI, OI, TI, AA, ES]
  std::array<double, 7> x0 = {0.0, 0.0, 0.0, 0.0, 0.0, 0.2, 50.0};
  int periods = 30;       // last reported observation period
  int first_period = 4;   // NI is pinned to its initial value before this
  double overflow_guard = 1e100;  // beyond this the draw is chaotic-divergent
  // The source model defines every state as non-negative; a trajectory that
  // crosses zero has left the model's domain of validity and is treated as
  // divergent (chaotic parameter draws drift negative long before any
  // numeric overflow). Turn off to observe the raw iteration.
  bool exclude_negative = true;
};

class InnovationModel {
 public:
  explicit InnovationModel(const InnovationConfig& config = {});

  int dimension() const { return 12; }
  int outputs() const { return config_.periods - config_.first_period + 1; }
  const InnovationConfig& config() const { return config_; }

  /// NI at observation periods first_period..periods. Throws SimulationError
  /// (tagged with sample and period) if the state exceeds the overflow guard.
  Eigen::VectorXd simulate(const Eigen::VectorXd& theta, long sample_index = -1) const;

 private:
  InnovationConfig config_;
};

}  // namespace pcx::models
