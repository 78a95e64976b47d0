#include "pcx/models/rlc.hpp"

#include <cmath>

#include "pcx/errors.hpp"

namespace pcx::models {

namespace {
constexpr double kTwoPi = 6.28318530717958647692529;
}

RlcModel::RlcModel(const RlcConfig& config) : config_(config) {
  steps_per_instant_ = static_cast<int>(std::llround(config.sample_every / config.step));
  if (steps_per_instant_ < 1 ||
      std::abs(steps_per_instant_ * config.step - config.sample_every) >
          1e-12 * config.sample_every)
    throw ConfigError("RlcModel: step must divide sample_every exactly");
  instants_ = static_cast<int>(std::llround(config.horizon / config.sample_every));
  if (std::abs(instants_ * config.sample_every - config.horizon) > 1e-12 * config.horizon)
    throw ConfigError("RlcModel: sample_every must divide horizon exactly");
  steps_ = steps_per_instant_ * instants_;

  kl_ = build_kl_basis(
      ExpCovarianceSpec{config.kl_sigma, config.kl_mu, config.horizon},
      config.kl_terms, 1.0 / std::sqrt(3.0));

  // Eigenfunction and sinusoid values on the half-step grid the RK4 stages
  // touch, shared by all simulations of this model instance.
  const Eigen::Index grid = 2 * steps_ + 1;
  kl_grid_.resize(grid, config.kl_terms);
  sin_grid_.resize(grid);
  for (Eigen::Index j = 0; j < grid; ++j) {
    double t = 0.5 * config.step * static_cast<double>(j);
    for (int i = 0; i < config.kl_terms; ++i) kl_grid_(j, i) = eval_kl_eigenfunction(kl_, i, t);
    sin_grid_[j] = config.a4 * std::sin(kTwoPi * t / config.a5);
  }
}

RlcModel::Output RlcModel::simulate(const Eigen::VectorXd& theta, long sample_index) const {
  if (theta.size() != dimension())
    throw DimensionError("RlcModel::simulate: theta must have dimension 13");

  const double r = config_.r0 * (1.0 + 0.3 * theta[0]);
  const double l_bar = config_.l0 * (1.0 + 0.2 * theta[1]);
  const double c_bar = config_.c0 * (1.0 + 0.2 * theta[2]);

  // Device current on the half-step grid: sinusoid + scaled KL path.
  Eigen::VectorXd kl_coef(config_.kl_terms);
  for (int i = 0; i < config_.kl_terms; ++i)
    kl_coef[i] = std::sqrt(kl_.lambdas[static_cast<std::size_t>(i)]) / kl_.theta_std *
                 theta[3 + i];
  Eigen::VectorXd i_d = sin_grid_ + config_.a3 * (kl_grid_ * kl_coef);

  const double h = config_.step;
  const double u = config_.u;
  double il = config_.x0_il;
  double vc = config_.x0_vc;

  auto deriv = [&](double i, double v, Eigen::Index grid_idx, double& di, double& dv) {
    double l = 0.5 * l_bar * (1.0 + std::exp(config_.a1 * i * i));
    double c = 0.5 * c_bar * (1.0 + std::exp(config_.a2 * v * v));
    di = (-v - r * i + u) / l;
    dv = (i - i_d[grid_idx]) / c;
  };

  Output out;
  out.i_l.resize(instants_);
  out.v_c.resize(instants_);
  int next_output = 1;
  for (int k = 0; k < steps_; ++k) {
    const Eigen::Index g0 = 2 * k, g1 = 2 * k + 1, g2 = 2 * k + 2;
    double k1i, k1v, k2i, k2v, k3i, k3v, k4i, k4v;
    deriv(il, vc, g0, k1i, k1v);
    deriv(il + 0.5 * h * k1i, vc + 0.5 * h * k1v, g1, k2i, k2v);
    deriv(il + 0.5 * h * k2i, vc + 0.5 * h * k2v, g1, k3i, k3v);
    deriv(il + h * k3i, vc + h * k3v, g2, k4i, k4v);
    il += h / 6.0 * (k1i + 2.0 * k2i + 2.0 * k3i + k4i);
    vc += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!std::isfinite(il) || !std::isfinite(vc))
      throw SimulationError("RlcModel: non-finite state", sample_index, k);
    if ((k + 1) % steps_per_instant_ == 0) {
      out.i_l[next_output - 1] = il;
      out.v_c[next_output - 1] = vc;
      ++next_output;
    }
  }
  return out;
}

}  // namespace pcx::models
