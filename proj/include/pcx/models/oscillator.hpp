#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>

#include "pcx/errors.hpp"

#include "pcx/rng.hpp"

namespace pcx::models {

inline constexpr int kOscSpecies = 9;    // [A, R, P_A, P_R, P_AA, P_RA, mRNA_A, mRNA_R, A_R]
inline constexpr int kOscReactions = 16;

using OscState = std::array<std::int64_t, kOscSpecies>;

/// Genetic oscillator with an activator/repressor pair: sixteen reactions,
/// parameters c_i = (1 + spread * theta_i) * nominal_i with theta uniform on
/// [-1, 1]. Simulated by the modified next reaction method with one
/// unit-exponential firing stream per (realization, reaction) pair, the
/// streams fixed across theta (common reaction paths), so for a given stream
/// seed the outputs are a deterministic function of theta.
struct OscillatorConfig {
  std::array<double, kOscReactions> nominal = {50.0, 0.01, 50.0, 5.0, 20.0, 1.0,
                                               50.0, 1.0,  100.0, 1.0, 0.2, 10.0,
                                               0.5,  1.0,  10.0,  5000.0};
  double spread = 0.1;
  OscState x0 = {0, 177, 1, 1, 0, 0, 4, 0, 279};
  double horizon = 50.0;
  double output_every = 5.0;
  int reps = 1000;                 // SSA realizations averaged per theta
  std::uint64_t stream_seed = 2718281828;  // base seed of the firing streams
};

/// Propensities of all reactions at the given state; a_2 and a_4 use the
/// composite rates c15*c1 and c16*c2.
void oscillator_propensities(const OscState& x, const std::array<double, kOscReactions>& c,
                             std::array<double, kOscReactions>& a);

/// Per-reaction internal clocks of the modified next reaction method.
struct SsaClocks {
  std::array<double, kOscReactions> internal_time;  // T_i
  std::array<double, kOscReactions> next_fire;      // P_i, unit-exponential increments
  std::array<std::uint64_t, kOscReactions> counters;
  std::array<RandomStream, kOscReactions> streams;

  SsaClocks(std::uint64_t seed, std::uint64_t realization);
};

struct SsaStep {
  int reaction;  // -1 when every propensity is zero (simulation idles)
  double dt;     // +inf in the idle case
};

/// Advances the clocks by one firing: picks argmin_i (P_i - T_i)/a_i, moves
/// every internal clock forward, applies the stoichiometry and draws the
/// firing's replacement from the reaction's stream.
SsaStep ssa_step(OscState& x, const std::array<double, kOscReactions>& a, SsaClocks& clocks);

class OscillatorModel {
 public:
  explicit OscillatorModel(const OscillatorConfig& config = {});

  int dimension() const { return kOscReactions; }
  int instants() const { return instants_; }
  const OscillatorConfig& config() const { return config_; }

  struct Output {
    Eigen::VectorXd mean_a;  // across-realization mean of A at t_i = i * output_every
    Eigen::VectorXd var_a;   // across-realization variance (mean of squared deviations)
  };

  Output simulate(const Eigen::VectorXd& theta) const;

  /// One realization: A at each output instant.
  void run_realization(const std::array<double, kOscReactions>& c, int realization,
                       Eigen::VectorXd& a_out) const;

 private:
  OscillatorConfig config_;
  int instants_ = 0;
};

}  // namespace pcx::models
