#pragma once

#include <string>

#include "pcx/klexpand.hpp"
#include "pcx/pipeline.hpp"

namespace pcx {

/// Full-precision decimal formatting (%.17g); round-trips a double exactly.
std::string format_full(double v);

/// RunConfig from a JSON file with nested sections; unspecified keys fall
/// back to the model's paper defaults. See README for the schema.
RunConfig load_run_config(const std::string& path);

// Sample batches: CSV with header theta_1,...,theta_n,pdf plus a JSON
// metadata sidecar recording the seed and distribution.
void write_sample_csv(const std::string& path, const SampleBatch& batch);
void write_sample_meta(const std::string& path, const SampleBatch& batch,
                       const DistributionSpec& spec);

/// Simulation outputs: CSV with columns sample_index,variable,time_index,value.
void write_outputs_csv(const std::string& path, const std::vector<TargetId>& targets,
                       const Eigen::MatrixXd& outputs);

void write_fit_report(const std::string& path, const PipelineResult& result);
void write_pce_models(const std::string& out_dir, const PipelineResult& result);

void write_validation_csv(const std::string& path, const ValidationReport& report);
void write_validation_histograms(const std::string& path, const ValidationReport& report);
void write_convergence_report(const std::string& csv_path, const std::string& json_path,
                              const ConvergenceReport& report);
void write_ls_comparison_csv(const std::string& path, const LsComparisonReport& report);

void write_kl_basis(const std::string& path, const KlBasis& basis);
void write_kl_covariance_grid(const std::string& path, const KlBasis& basis, int grid);

}  // namespace pcx
