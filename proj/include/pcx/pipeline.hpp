#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pcx/models/innovation.hpp"
#include "pcx/models/oscillator.hpp"
#include "pcx/models/rlc.hpp"
#include "pcx/pce_model.hpp"
#include "pcx/sampling.hpp"
#include "pcx/solver.hpp"

namespace pcx {

struct TargetId {
  std::string variable;
  int time_index;  // instant label (RLC/oscillator) or observation period (innovation)
};

/// Uniform view of the case-study simulators: one run of the underlying
/// model yields every (variable, instant) target at once.
class StochasticModel {
 public:
  virtual ~StochasticModel() = default;
  virtual const std::string& name() const = 0;
  virtual InputFamily input_family() const = 0;
  virtual int dimension() const = 0;
  virtual const std::vector<TargetId>& targets() const = 0;
  virtual Eigen::VectorXd run(const Eigen::VectorXd& theta, long sample_index) const = 0;
};

struct WeightSpec {
  double w0 = 1e-4;
  std::optional<double> zeta;                   // power profile
  std::optional<std::vector<double>> by_order;  // explicit ladder, one per order
};

struct VarianceRule {
  enum class Kind { None, Absolute, MultipleOfEmpirical };
  Kind kind = Kind::None;
  double value = 0.0;  // bound itself, or the multiple of the empirical variance
};

struct Seeds {
  std::uint64_t sampling = 1;
  std::uint64_t constraints = 2;
  std::uint64_t validation = 3;
  std::uint64_t pce_mc = 4;
};

struct RunConfig {
  std::string model = "rlc";
  models::RlcConfig rlc;
  models::InnovationConfig innovation;
  models::OscillatorConfig oscillator;

  Eigen::Index nu = 30;
  int max_degree = 2;
  WeightSpec weights;
  double beta = 5.0;
  VarianceRule variance_rule;
  int positivity_count = 0;
  SolverOptions solver;
  Seeds seeds;
  double max_failure_fraction = 0.05;
  // The fit weighs samples by their joint pdf scaled to unit maximum; the
  // relative weighting is unchanged and beta keeps a data-independent scale.
  bool normalize_pdf_weights = true;
};

/// Paper defaults for each case study (sample count, order, weights, beta,
/// constraint set).
RunConfig default_config(const std::string& model_name);

std::unique_ptr<StochasticModel> make_model(const RunConfig& config);

struct PipelineResult {
  std::vector<TargetId> targets;
  std::vector<FitResult> fits;
  std::vector<PceModel> models;
  MultiIndexSet index_set;
  BasisFamily family;
  SampleBatch training;             // kept samples only
  Eigen::MatrixXd training_outputs; // kept x targets
  long simulations_run = 0;
  long samples_excluded = 0;
};

/// Algorithm-2 end to end: sample, simulate once per sample, fit one convex
/// program per target. Aborts when more than max_failure_fraction of the
/// simulations fail.
PipelineResult run_pipeline(const RunConfig& config);

struct ConvergenceReport {
  TargetId target;
  std::vector<Eigen::Index> nu_values;
  std::vector<Eigen::VectorXd> coefficients;  // aligned graded order
  std::vector<double> distances;              // inf-norm between consecutive fits
  Eigen::Index chosen_nu = 0;                 // first plateau entry, last otherwise
  double plateau_rtol = 0.05;
};

/// Refits one target on nested sample prefixes of increasing size. The
/// chosen nu is the first schedule entry whose distance stays below
/// plateau_rtol * |a|_inf for two consecutive steps.
ConvergenceReport convergence_study(const RunConfig& config,
                                    const std::vector<Eigen::Index>& schedule,
                                    const TargetId& target);

struct TargetComparison {
  TargetId id;
  double model_mean = 0.0, model_variance = 0.0;
  double model_q25 = 0.0, model_q50 = 0.0, model_q75 = 0.0;
  double pce_mean = 0.0, pce_variance = 0.0;
  double pce_q25 = 0.0, pce_q50 = 0.0, pce_q75 = 0.0;
  EmpiricalStats model_hist, pce_hist;
};

struct ValidationReport {
  std::vector<TargetComparison> comparisons;
  long model_runs = 0;
  long pce_evals = 0;
  long model_runs_excluded = 0;
};

/// Side-by-side statistics from m_model direct simulations and m_pce PCE
/// evaluations. With common_draws the PCE is evaluated at the same input
/// draws as the direct runs (m_pce is then ignored), which removes the
/// sampling noise from the comparison; m_model = 0 emits PCE-only statistics.
ValidationReport validate(const PipelineResult& result, const RunConfig& config,
                          Eigen::Index m_model, Eigen::Index m_pce,
                          bool common_draws = false);

struct LsComparisonRow {
  TargetId id;
  double convex_variance = 0.0;  // Var of the convex-fit surrogate
  double ls_variance = 0.0;      // Var of the least-squares surrogate
};

struct LsComparisonReport {
  std::vector<LsComparisonRow> rows;
  std::vector<Eigen::VectorXd> ls_coefficients;
};

/// Least-squares fit on exactly the data the convex fit used.
LsComparisonReport ls_comparison(const PipelineResult& result);

}  // namespace pcx
