#include "pcx/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace pcx {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open for writing: " + path);
  return os;
}

json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return j;
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunConfig load_run_config(const std::string& path) {
  json j = read_json_file(path);
  if (!j.contains("model")) throw ConfigError("config: missing \"model\"");
  RunConfig config = default_config(j.at("model").get<std::string>());

  maybe(j, "nu", config.nu);
  maybe(j, "max_degree", config.max_degree);
  maybe(j, "beta", config.beta);
  maybe(j, "max_failure_fraction", config.max_failure_fraction);
  maybe(j, "normalize_pdf_weights", config.normalize_pdf_weights);
  maybe(j, "positivity_count", config.positivity_count);

  if (j.contains("weights")) {
    const json& w = j.at("weights");
    config.weights = WeightSpec{};
    maybe(w, "w0", config.weights.w0);
    if (w.contains("zeta")) config.weights.zeta = w.at("zeta").get<double>();
    if (w.contains("ladder"))
      config.weights.by_order = w.at("ladder").get<std::vector<double>>();
    if (!config.weights.zeta && !config.weights.by_order)
      throw ConfigError("config: weights needs \"zeta\" or \"ladder\"");
  }
  if (j.contains("variance_rule")) {
    const json& v = j.at("variance_rule");
    std::string kind = v.at("kind").get<std::string>();
    if (kind == "none") {
      config.variance_rule = {VarianceRule::Kind::None, 0.0};
    } else if (kind == "absolute") {
      config.variance_rule = {VarianceRule::Kind::Absolute, v.at("value").get<double>()};
    } else if (kind == "multiple_of_empirical") {
      config.variance_rule = {VarianceRule::Kind::MultipleOfEmpirical,
                              v.at("value").get<double>()};
    } else {
      throw ConfigError("config: unknown variance rule kind: " + kind);
    }
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    maybe(s, "tol", config.solver.tol);
    maybe(s, "feas_tol", config.solver.feas_tol);
    maybe(s, "max_iters", config.solver.max_iters);
    maybe(s, "rho", config.solver.rho);
    maybe(s, "adapt_rho", config.solver.adapt_rho);
  }
  if (j.contains("seeds")) {
    const json& s = j.at("seeds");
    maybe(s, "sampling", config.seeds.sampling);
    maybe(s, "constraints", config.seeds.constraints);
    maybe(s, "validation", config.seeds.validation);
    maybe(s, "pce_mc", config.seeds.pce_mc);
  }
  if (j.contains("model_params")) {
    const json& m = j.at("model_params");
    if (config.model == "rlc") {
      auto& c = config.rlc;
      maybe(m, "r0", c.r0);
      maybe(m, "l0", c.l0);
      maybe(m, "c0", c.c0);
      maybe(m, "a1", c.a1);
      maybe(m, "a2", c.a2);
      maybe(m, "a3", c.a3);
      maybe(m, "a4", c.a4);
      maybe(m, "a5", c.a5);
      maybe(m, "u", c.u);
      maybe(m, "horizon", c.horizon);
      maybe(m, "sample_every", c.sample_every);
      maybe(m, "step", c.step);
      maybe(m, "kl_terms", c.kl_terms);
      maybe(m, "kl_sigma", c.kl_sigma);
      maybe(m, "kl_mu", c.kl_mu);
    } else if (config.model == "innovation") {
      auto& c = config.innovation;
      maybe(m, "periods", c.periods);
      maybe(m, "first_period", c.first_period);
      maybe(m, "overflow_guard", c.overflow_guard);
      maybe(m, "exclude_negative", c.exclude_negative);
    } else if (config.model == "oscillator") {
      auto& c = config.oscillator;
      maybe(m, "reps", c.reps);
      maybe(m, "horizon", c.horizon);
      maybe(m, "output_every", c.output_every);
      maybe(m, "spread", c.spread);
      maybe(m, "stream_seed", c.stream_seed);
    }
  }
  return config;
}

void write_sample_csv(const std::string& path, const SampleBatch& batch) {
  auto os = open_out(path);
  const Eigen::Index n = batch.samples.cols();
  for (Eigen::Index i = 0; i < n; ++i) os << "theta_" << (i + 1) << ',';
  os << "pdf\n";
  for (Eigen::Index r = 0; r < batch.samples.rows(); ++r) {
    for (Eigen::Index i = 0; i < n; ++i) os << format_full(batch.samples(r, i)) << ',';
    os << format_full(batch.pdf_values[r]) << '\n';
  }
}

void write_sample_meta(const std::string& path, const SampleBatch& batch,
                       const DistributionSpec& spec) {
  json j;
  j["seed"] = batch.seed;
  j["family"] = input_family_name(spec.family);
  j["dimension"] = spec.dimension;
  j["count"] = batch.samples.rows();
  open_out(path) << j.dump(2) << '\n';
}

void write_outputs_csv(const std::string& path, const std::vector<TargetId>& targets,
                       const Eigen::MatrixXd& outputs) {
  auto os = open_out(path);
  os << "sample_index,variable,time_index,value\n";
  for (Eigen::Index r = 0; r < outputs.rows(); ++r)
    for (std::size_t t = 0; t < targets.size(); ++t)
      os << r << ',' << targets[t].variable << ',' << targets[t].time_index << ','
         << format_full(outputs(r, static_cast<Eigen::Index>(t))) << '\n';
}

void write_fit_report(const std::string& path, const PipelineResult& result) {
  json j;
  j["simulations_run"] = result.simulations_run;
  j["samples_excluded"] = result.samples_excluded;
  json targets = json::array();
  for (std::size_t t = 0; t < result.targets.size(); ++t) {
    const FitResult& fit = result.fits[t];
    json jt;
    jt["variable"] = result.targets[t].variable;
    jt["time_index"] = result.targets[t].time_index;
    jt["objective"] = fit.objective;
    jt["iterations"] = fit.iterations;
    jt["primal_residual"] = fit.primal_residual;
    jt["dual_residual"] = fit.dual_residual;
    jt["constraint_violation"] = fit.constraint_violation;
    jt["mean"] = result.models[t].mean();
    jt["variance"] = result.models[t].variance();
    json coefs = json::array();
    for (Eigen::Index k = 0; k < fit.coefficients.size(); ++k)
      coefs.push_back(fit.coefficients[k]);
    jt["coefficients"] = std::move(coefs);
    targets.push_back(std::move(jt));
  }
  j["targets"] = std::move(targets);
  open_out(path) << j.dump(2) << '\n';
}

void write_pce_models(const std::string& out_dir, const PipelineResult& result) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  for (std::size_t t = 0; t < result.targets.size(); ++t) {
    std::string name = out_dir + "/model_" + result.targets[t].variable + "_t" +
                       std::to_string(result.targets[t].time_index) + ".pce";
    auto os = open_out(name);
    result.models[t].save(os);
  }
}

void write_validation_csv(const std::string& path, const ValidationReport& report) {
  auto os = open_out(path);
  os << "variable,time_index,stat,model_mc,pce,rel_error\n";
  auto emit = [&](const TargetComparison& c, const char* stat, double m, double p) {
    double rel = m != 0.0 ? (p - m) / m : 0.0;
    os << c.id.variable << ',' << c.id.time_index << ',' << stat << ',' << format_full(m)
       << ',' << format_full(p) << ',' << format_full(rel) << '\n';
  };
  for (const auto& c : report.comparisons) {
    emit(c, "mean", c.model_mean, c.pce_mean);
    emit(c, "variance", c.model_variance, c.pce_variance);
    emit(c, "q25", c.model_q25, c.pce_q25);
    emit(c, "q50", c.model_q50, c.pce_q50);
    emit(c, "q75", c.model_q75, c.pce_q75);
  }
}

void write_validation_histograms(const std::string& path, const ValidationReport& report) {
  auto os = open_out(path);
  os << "variable,time_index,source,bin_lo,bin_hi,density\n";
  auto emit = [&](const TargetComparison& c, const char* source, const EmpiricalStats& h) {
    for (std::size_t b = 0; b < h.density.size(); ++b)
      os << c.id.variable << ',' << c.id.time_index << ',' << source << ','
         << format_full(h.bin_edges[b]) << ',' << format_full(h.bin_edges[b + 1]) << ','
         << format_full(h.density[b]) << '\n';
  };
  for (const auto& c : report.comparisons) {
    if (!c.model_hist.density.empty()) emit(c, "model_mc", c.model_hist);
    if (!c.pce_hist.density.empty()) emit(c, "pce", c.pce_hist);
  }
}

void write_convergence_report(const std::string& csv_path, const std::string& json_path,
                              const ConvergenceReport& report) {
  {
    auto os = open_out(csv_path);
    os << "nu,distance_to_next\n";
    for (std::size_t s = 0; s < report.distances.size(); ++s)
      os << report.nu_values[s] << ',' << format_full(report.distances[s]) << '\n';
  }
  json j;
  j["variable"] = report.target.variable;
  j["time_index"] = report.target.time_index;
  j["nu_values"] = report.nu_values;
  j["distances"] = report.distances;
  j["chosen_nu"] = report.chosen_nu;
  j["plateau_rtol"] = report.plateau_rtol;
  open_out(json_path) << j.dump(2) << '\n';
}

void write_ls_comparison_csv(const std::string& path, const LsComparisonReport& report) {
  auto os = open_out(path);
  os << "variable,time_index,convex_variance,ls_variance\n";
  for (const auto& row : report.rows)
    os << row.id.variable << ',' << row.id.time_index << ','
       << format_full(row.convex_variance) << ',' << format_full(row.ls_variance) << '\n';
}

void write_kl_basis(const std::string& path, const KlBasis& basis) {
  auto os = open_out(path);
  basis.write(os);
}

void write_kl_covariance_grid(const std::string& path, const KlBasis& basis, int grid) {
  auto os = open_out(path);
  os << "t1,t2,exact,truncated\n";
  const double T = basis.spec.half_width;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      double t1 = -T + 2.0 * T * i / (grid - 1);
      double t2 = -T + 2.0 * T * j / (grid - 1);
      double exact = basis.spec.sigma * basis.spec.sigma *
                     std::exp(-basis.spec.mu * std::abs(t1 - t2));
      os << format_full(t1) << ',' << format_full(t2) << ',' << format_full(exact) << ','
         << format_full(reconstruct_covariance(basis, t1, t2)) << '\n';
    }
  }
}

}  // namespace pcx
