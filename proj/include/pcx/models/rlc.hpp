#pragma once

#include <Eigen/Core>

#include "pcx/klexpand.hpp"

namespace pcx::models {

/// Nonlinear series RLC circuit driven by a constant voltage u and a device
/// current made of a sinusoid plus a zero-mean exponential-covariance noise
/// process (truncated KL expansion). Thirteen uniform inputs: theta_1 scales
/// R, theta_2 the peak inductance, theta_3 the peak capacitance, theta_4..13
/// drive the KL terms.
struct RlcConfig {
  double r0 = 3.5;     // ohm
  double l0 = 1e-3;    // H, peak inductance base (not stated in the source model)
  double c0 = 1e-4;    // F, peak capacitance base
  double a1 = -0.5e8;  // inductance nonlinearity exponent (1/A^2)
  double a2 = -0.5e6;  // capacitance nonlinearity exponent (1/V^2)
  double a3 = 1e-2;    // noise current scale
  double a4 = 5e-3;    // A, sinusoid amplitude
  double a5 = 1e-2;    // s, sinusoid period
  double u = 1e-2;     // V
  double horizon = 0.02;    // s
  double sample_every = 2e-3;  // s, outputs at t_i = i * sample_every
  double step = 1e-5;          // s, RK4 step; must divide sample_every
  double x0_il = 0.0;
  double x0_vc = 1e-2;
  double kl_sigma = 1.0;
  double kl_mu = 50.0;
  int kl_terms = 10;
};

class RlcModel {
 public:
  explicit RlcModel(const RlcConfig& config);

  int dimension() const { return 3 + config_.kl_terms; }
  int instants() const { return instants_; }
  const RlcConfig& config() const { return config_; }
  const KlBasis& kl_basis() const { return kl_; }

  struct Output {
    Eigen::VectorXd i_l;  // at t_i = i * sample_every, i = 1..instants
    Eigen::VectorXd v_c;
  };

  /// Fixed-step RK4 integration; bit-identical for identical theta.
  Output simulate(const Eigen::VectorXd& theta, long sample_index = -1) const;

 private:
  RlcConfig config_;
  KlBasis kl_;
  int steps_ = 0;
  int instants_ = 0;
  int steps_per_instant_ = 0;
  Eigen::MatrixXd kl_grid_;      // (2 steps + 1) x kl_terms eigenfunction values
  Eigen::VectorXd sin_grid_;     // sinusoid at the same half-step grid
};

}  // namespace pcx::models
