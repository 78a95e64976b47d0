#include "pcx/models/innovation.hpp"

#include <cmath>

#include "pcx/errors.hpp"

namespace pcx::models {

InnovationModel::InnovationModel(const InnovationConfig& config) : config_(config) {
  if (config.first_period < 1 || config.first_period > config.periods)
    throw ConfigError("InnovationModel: first_period out of range");
}

Eigen::VectorXd InnovationModel::simulate(const Eigen::VectorXd& theta,
                                          long sample_index) const {
  if (theta.size() != 12)
    throw DimensionError("InnovationModel::simulate: theta must have dimension 12");
  double c[12];
  for (int i = 0; i < 12; ++i) c[i] = config_.mean[static_cast<std::size_t>(i)] +
                                      config_.stddev[static_cast<std::size_t>(i)] * theta[i];

  double ii = config_.x0[0], is = config_.x0[1], ni = config_.x0[2], oi = config_.x0[3],
         ti = config_.x0[4], aa = config_.x0[5], es = config_.x0[6];

  Eigen::VectorXd out(outputs());
  // Reported period p corresponds to internal step p - 1.
  const int last_step = config_.periods - 1;
  const int first_step = config_.first_period - 1;
  if (first_step == 0) out[0] = ni;
  for (int k = 1; k <= last_step; ++k) {
    double aa_new = aa + c[7] * ni + c[8] * ni * ni + c[9] * ti + c[10] * ti * ti;
    double es_new = c[11] * es - ii;
    double ii_new = c[0] * es_new * aa_new;
    double is_new = c[1] * is + ni + ii;
    double ni_new = c[2] * is;
    double oi_new = c[5] * ni_new + c[3] * is_new + c[4] * ii_new;
    double ti_new = c[6] * ti + oi_new;
    aa = aa_new;
    es = es_new;
    ii = ii_new;
    is = is_new;
    ni = ni_new;
    oi = oi_new;
    ti = ti_new;
    double extreme = std::max({std::abs(ii), std::abs(is), std::abs(ni), std::abs(oi),
                               std::abs(ti), std::abs(aa), std::abs(es)});
    if (!(extreme < config_.overflow_guard))
      throw SimulationError("InnovationModel: divergent trajectory", sample_index, k + 1);
    if (config_.exclude_negative &&
        (ii < 0.0 || is < 0.0 || ni < 0.0 || oi < 0.0 || ti < 0.0 || aa < 0.0 || es < 0.0))
      throw SimulationError("InnovationModel: negative state, trajectory left the model domain",
                            sample_index, k + 1);
    if (k >= first_step) out[k - first_step] = ni;
  }
  return out;
}

}  // namespace pcx::models
