#include "pcx/models/oscillator.hpp"

#include <cmath>
#include <limits>

#include "pcx/errors.hpp"

namespace pcx::models {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stoichiometry: species change of each reaction.
// Species: 0 A, 1 R, 2 P_A, 3 P_R, 4 P_AA, 5 P_RA, 6 mRNA_A, 7 mRNA_R, 8 A_R.
constexpr int kStoich[kOscReactions][kOscSpecies] = {
    {0, 0, 0, 0, 0, 0, 1, 0, 0},     // P_A -> P_A + mRNA_A
    {0, 0, 0, 0, 0, 0, 1, 0, 0},     // P_AA -> P_AA + mRNA_A
    {0, 0, 0, 0, 0, 0, 0, 1, 0},     // P_R -> P_R + mRNA_R
    {0, 0, 0, 0, 0, 0, 0, 1, 0},     // P_RA -> P_RA + mRNA_R
    {1, 0, 0, 0, 0, 0, 0, 0, 0},     // mRNA_A -> mRNA_A + A
    {0, 1, 0, 0, 0, 0, 0, 0, 0},     // mRNA_R -> mRNA_R + R
    {-1, -1, 0, 0, 0, 0, 0, 0, 1},   // A + R -> A_R
    {-1, 0, -1, 0, 1, 0, 0, 0, 0},   // P_A + A -> P_AA
    {1, 0, 1, 0, -1, 0, 0, 0, 0},    // P_AA -> P_A + A
    {-1, 0, 0, -1, 0, 1, 0, 0, 0},   // P_R + A -> P_RA
    {1, 0, 0, 1, 0, -1, 0, 0, 0},    // P_RA -> P_R + A
    {-1, 0, 0, 0, 0, 0, 0, 0, 0},    // A -> 0
    {0, -1, 0, 0, 0, 0, 0, 0, 0},    // R -> 0
    {0, 0, 0, 0, 0, 0, -1, 0, 0},    // mRNA_A -> 0
    {0, 0, 0, 0, 0, 0, 0, -1, 0},    // mRNA_R -> 0
    {0, 1, 0, 0, 0, 0, 0, 0, -1},    // A_R -> R, the bound activator degrades
};

}  // namespace

void oscillator_propensities(const OscState& x, const std::array<double, kOscReactions>& c,
                             std::array<double, kOscReactions>& a) {
  const auto A = static_cast<double>(x[0]);
  const auto R = static_cast<double>(x[1]);
  const auto PA = static_cast<double>(x[2]);
  const auto PR = static_cast<double>(x[3]);
  const auto PAA = static_cast<double>(x[4]);
  const auto PRA = static_cast<double>(x[5]);
  const auto MA = static_cast<double>(x[6]);
  const auto MR = static_cast<double>(x[7]);
  const auto AR = static_cast<double>(x[8]);
  a[0] = c[0] * PA;
  a[1] = c[14] * c[0] * PAA;
  a[2] = c[1] * PR;
  a[3] = c[15] * c[1] * PRA;
  a[4] = c[2] * MA;
  a[5] = c[3] * MR;
  a[6] = c[4] * A * R;
  a[7] = c[5] * PA * A;
  a[8] = c[6] * PAA;
  a[9] = c[7] * PR * A;
  a[10] = c[8] * PRA;
  a[11] = c[9] * A;
  a[12] = c[10] * R;
  a[13] = c[11] * MA;
  a[14] = c[12] * MR;
  a[15] = c[13] * AR;
}

SsaClocks::SsaClocks(std::uint64_t seed, std::uint64_t realization)
    : streams{RandomStream::keyed(seed, realization, 0),
              RandomStream::keyed(seed, realization, 1),
              RandomStream::keyed(seed, realization, 2),
              RandomStream::keyed(seed, realization, 3),
              RandomStream::keyed(seed, realization, 4),
              RandomStream::keyed(seed, realization, 5),
              RandomStream::keyed(seed, realization, 6),
              RandomStream::keyed(seed, realization, 7),
              RandomStream::keyed(seed, realization, 8),
              RandomStream::keyed(seed, realization, 9),
              RandomStream::keyed(seed, realization, 10),
              RandomStream::keyed(seed, realization, 11),
              RandomStream::keyed(seed, realization, 12),
              RandomStream::keyed(seed, realization, 13),
              RandomStream::keyed(seed, realization, 14),
              RandomStream::keyed(seed, realization, 15)} {
  for (int i = 0; i < kOscReactions; ++i) {
    internal_time[static_cast<std::size_t>(i)] = 0.0;
    next_fire[static_cast<std::size_t>(i)] = streams[static_cast<std::size_t>(i)].exponential();
    counters[static_cast<std::size_t>(i)] = 0;
  }
}

SsaStep ssa_step(OscState& x, const std::array<double, kOscReactions>& a, SsaClocks& clocks) {
  double best = kInf;
  int which = -1;
  for (int i = 0; i < kOscReactions; ++i) {
    if (a[static_cast<std::size_t>(i)] <= 0.0) continue;
    double wait = (clocks.next_fire[static_cast<std::size_t>(i)] -
                   clocks.internal_time[static_cast<std::size_t>(i)]) /
                  a[static_cast<std::size_t>(i)];
    if (wait < best) {
      best = wait;
      which = i;
    }
  }
  if (which < 0) return {-1, kInf};

  for (int i = 0; i < kOscReactions; ++i)
    clocks.internal_time[static_cast<std::size_t>(i)] += a[static_cast<std::size_t>(i)] * best;
  for (int s = 0; s < kOscSpecies; ++s) x[static_cast<std::size_t>(s)] += kStoich[which][s];
  clocks.counters[static_cast<std::size_t>(which)] += 1;
  clocks.next_fire[static_cast<std::size_t>(which)] +=
      clocks.streams[static_cast<std::size_t>(which)].exponential();
  return {which, best};
}

OscillatorModel::OscillatorModel(const OscillatorConfig& config) : config_(config) {
  instants_ = static_cast<int>(std::llround(config.horizon / config.output_every));
  if (instants_ < 1 ||
      std::abs(instants_ * config.output_every - config.horizon) > 1e-9 * config.horizon)
    throw ConfigError("OscillatorModel: output_every must divide horizon");
  if (config.reps < 1) throw ConfigError("OscillatorModel: reps must be >= 1");
}

void OscillatorModel::run_realization(const std::array<double, kOscReactions>& c,
                                      int realization, Eigen::VectorXd& a_out) const {
  OscState x = config_.x0;
  SsaClocks clocks(config_.stream_seed, static_cast<std::uint64_t>(realization));
  std::array<double, kOscReactions> props;
  double t = 0.0;
  int out_idx = 0;
  const double dt_out = config_.output_every;

  while (out_idx < instants_) {
    oscillator_propensities(x, c, props);
    OscState before = x;
    SsaStep step = ssa_step(x, props, clocks);
    double t_next = t + step.dt;
    // The state on [t, t_next) is `before`; outputs are right-continuous, so a
    // sample time equal to t_next is harvested on a later pass with the
    // post-jump state.
    while (out_idx < instants_ && (out_idx + 1) * dt_out < t_next) {
      a_out[out_idx] = static_cast<double>(before[0]);
      ++out_idx;
    }
    if (step.reaction < 0) break;
    t = t_next;
    if (t >= config_.horizon) {
      while (out_idx < instants_) {
        a_out[out_idx] = static_cast<double>(before[0]);
        ++out_idx;
      }
      break;
    }
  }
  while (out_idx < instants_) {
    a_out[out_idx] = static_cast<double>(x[0]);
    ++out_idx;
  }
}

OscillatorModel::Output OscillatorModel::simulate(const Eigen::VectorXd& theta) const {
  if (theta.size() != kOscReactions)
    throw DimensionError("OscillatorModel::simulate: theta must have dimension 16");
  std::array<double, kOscReactions> c;
  for (int i = 0; i < kOscReactions; ++i)
    c[static_cast<std::size_t>(i)] =
        (1.0 + config_.spread * theta[i]) * config_.nominal[static_cast<std::size_t>(i)];

  Output out;
  out.mean_a = Eigen::VectorXd::Zero(instants_);
  out.var_a = Eigen::VectorXd::Zero(instants_);
  Eigen::VectorXd a_traj(instants_);
  Eigen::MatrixXd all(instants_, config_.reps);
  for (int r = 0; r < config_.reps; ++r) {
    run_realization(c, r, a_traj);
    all.col(r) = a_traj;
  }
  for (int i = 0; i < instants_; ++i) {
    double m = all.row(i).mean();
    out.mean_a[i] = m;
    out.var_a[i] = (all.row(i).array() - m).square().mean();
  }
  return out;
}

}  // namespace pcx::models
