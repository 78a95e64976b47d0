#include "pcx/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pcx/design.hpp"
#include "pcx/parallel.hpp"

namespace pcx {

namespace {

class RlcAdapter : public StochasticModel {
 public:
  explicit RlcAdapter(const models::RlcConfig& config) : model_(config), name_("rlc") {
    for (int i = 1; i <= model_.instants(); ++i) targets_.push_back({"i_L", i});
    for (int i = 1; i <= model_.instants(); ++i) targets_.push_back({"v_C", i});
  }
  const std::string& name() const override { return name_; }
  InputFamily input_family() const override { return InputFamily::UniformSymmetric; }
  int dimension() const override { return model_.dimension(); }
  const std::vector<TargetId>& targets() const override { return targets_; }
  Eigen::VectorXd run(const Eigen::VectorXd& theta, long sample_index) const override {
    auto out = model_.simulate(theta, sample_index);
    Eigen::VectorXd v(2 * model_.instants());
    v << out.i_l, out.v_c;
    return v;
  }
  const models::RlcModel& model() const { return model_; }

 private:
  models::RlcModel model_;
  std::string name_;
  std::vector<TargetId> targets_;
};

class InnovationAdapter : public StochasticModel {
 public:
  explicit InnovationAdapter(const models::InnovationConfig& config)
      : model_(config), name_("innovation") {
    for (int p = config.first_period; p <= config.periods; ++p) targets_.push_back({"NI", p});
  }
  const std::string& name() const override { return name_; }
  InputFamily input_family() const override { return InputFamily::StandardNormal; }
  int dimension() const override { return model_.dimension(); }
  const std::vector<TargetId>& targets() const override { return targets_; }
  Eigen::VectorXd run(const Eigen::VectorXd& theta, long sample_index) const override {
    return model_.simulate(theta, sample_index);
  }

 private:
  models::InnovationModel model_;
  std::string name_;
  std::vector<TargetId> targets_;
};

class OscillatorAdapter : public StochasticModel {
 public:
  explicit OscillatorAdapter(const models::OscillatorConfig& config)
      : model_(config), name_("oscillator") {
    for (int i = 1; i <= model_.instants(); ++i) targets_.push_back({"A_mean", i});
    for (int i = 1; i <= model_.instants(); ++i) targets_.push_back({"A_var", i});
  }
  const std::string& name() const override { return name_; }
  InputFamily input_family() const override { return InputFamily::UniformSymmetric; }
  int dimension() const override { return model_.dimension(); }
  const std::vector<TargetId>& targets() const override { return targets_; }
  Eigen::VectorXd run(const Eigen::VectorXd& theta, long) const override {
    auto out = model_.simulate(theta);
    Eigen::VectorXd v(2 * model_.instants());
    v << out.mean_a, out.var_a;
    return v;
  }

 private:
  models::OscillatorModel model_;
  std::string name_;
  std::vector<TargetId> targets_;
};

WeightLadder make_ladder(const MultiIndexSet& set, const WeightSpec& spec) {
  if (spec.by_order) return build_weight_ladder(set, *spec.by_order);
  if (spec.zeta) return build_weight_ladder(set, spec.w0, *spec.zeta);
  throw ConfigError("weights: either zeta or an explicit ladder is required");
}

double sample_variance(const Eigen::VectorXd& v) {
  if (v.size() < 2) return 0.0;
  double m = v.mean();
  return (v.array() - m).square().sum() / static_cast<double>(v.size() - 1);
}

struct SimulatedBatch {
  SampleBatch samples;              // kept rows
  Eigen::MatrixXd outputs;          // kept x targets
  long simulations_run = 0;
  long excluded = 0;
};

SimulatedBatch simulate_batch(const StochasticModel& model, Eigen::Index count,
                              std::uint64_t seed, double max_failure_fraction) {
  DistributionSpec spec{model.input_family(), model.dimension()};
  SampleBatch batch = draw_samples(spec, count, seed);
  const auto n_targets = static_cast<Eigen::Index>(model.targets().size());
  Eigen::MatrixXd outputs(count, n_targets);
  std::vector<char> failed(static_cast<std::size_t>(count), 0);
  parallel_for(count, [&](long r) {
    try {
      outputs.row(r) = model.run(batch.samples.row(r), r);
    } catch (const SimulationError&) {
      failed[static_cast<std::size_t>(r)] = 1;
    }
  });

  SimulatedBatch out;
  out.simulations_run = count;
  out.excluded = std::count(failed.begin(), failed.end(), 1);
  if (count > 0 &&
      static_cast<double>(out.excluded) > max_failure_fraction * static_cast<double>(count))
    throw Error("simulate_batch: " + std::to_string(out.excluded) + " of " +
                std::to_string(count) + " simulations failed, aborting");

  const Eigen::Index kept = count - out.excluded;
  out.samples.seed = batch.seed;
  out.samples.samples.resize(kept, model.dimension());
  out.samples.pdf_values.resize(kept);
  out.outputs.resize(kept, n_targets);
  Eigen::Index w = 0;
  for (Eigen::Index r = 0; r < count; ++r) {
    if (failed[static_cast<std::size_t>(r)]) continue;
    out.samples.samples.row(w) = batch.samples.row(r);
    out.samples.pdf_values[w] = batch.pdf_values[r];
    out.outputs.row(w) = outputs.row(r);
    ++w;
  }
  return out;
}

Eigen::VectorXd fitting_pdf_weights(const Eigen::VectorXd& pdf_values, bool normalize) {
  if (!normalize || pdf_values.size() == 0) return pdf_values;
  double mx = pdf_values.maxCoeff();
  if (mx <= 0.0) return pdf_values;
  return pdf_values / mx;
}

}  // namespace

RunConfig default_config(const std::string& model_name) {
  RunConfig config;
  config.model = model_name;
  config.solver.tol = 1e-6;
  config.solver.max_iters = 400000;
  if (model_name == "rlc") {
    config.nu = 30;
    config.max_degree = 2;
    config.weights.w0 = 0.00025;
    config.weights.by_order = std::vector<double>{0.00025, 0.5, 1.0};
    config.beta = 5.0;
  } else if (model_name == "innovation") {
    config.nu = 300;
    config.max_degree = 3;
    config.weights.w0 = 1e-4;
    config.weights.zeta = 2.0;
    config.beta = 1e3;
    config.variance_rule = {VarianceRule::Kind::MultipleOfEmpirical, 2.0};
    config.positivity_count = 500;
  } else if (model_name == "oscillator") {
    config.nu = 100;
    config.max_degree = 3;
    config.weights.w0 = 1e-4;
    config.weights.zeta = 3.0;
    config.beta = 1e3;
    config.positivity_count = 5000;
  } else {
    throw ConfigError("unknown model: " + model_name);
  }
  return config;
}

std::unique_ptr<StochasticModel> make_model(const RunConfig& config) {
  if (config.model == "rlc") return std::make_unique<RlcAdapter>(config.rlc);
  if (config.model == "innovation")
    return std::make_unique<InnovationAdapter>(config.innovation);
  if (config.model == "oscillator")
    return std::make_unique<OscillatorAdapter>(config.oscillator);
  throw ConfigError("unknown model: " + config.model);
}

PipelineResult run_pipeline(const RunConfig& config) {
  if (config.nu < 1) throw ConfigError("run_pipeline: nu must be >= 1");
  auto model = make_model(config);
  const BasisFamily family = paired_basis(model->input_family());

  SimulatedBatch sims =
      simulate_batch(*model, config.nu, config.seeds.sampling, config.max_failure_fraction);

  MultiIndexSet set(model->dimension(), config.max_degree);
  DesignMatrix design = build_design_matrix(sims.samples.samples, set, family);
  WeightLadder ladder = make_ladder(set, config.weights);
  Eigen::VectorXd lam =
      fitting_pdf_weights(sims.samples.pdf_values, config.normalize_pdf_weights);

  std::optional<BoundConstraints> bounds;
  if (config.positivity_count > 0) {
    DistributionSpec spec{model->input_family(), model->dimension()};
    SampleBatch extra = draw_samples(spec, config.positivity_count, config.seeds.constraints);
    BoundConstraints b;
    b.rows = build_design_matrix(extra.samples, set, family).phi;
    b.lower = Eigen::VectorXd::Zero(config.positivity_count);
    b.upper = Eigen::VectorXd::Constant(config.positivity_count,
                                        std::numeric_limits<double>::infinity());
    bounds = std::move(b);
  }

  PipelineResult result{.targets = model->targets(),
                        .fits = {},
                        .models = {},
                        .index_set = set,
                        .family = family,
                        .training = sims.samples,
                        .training_outputs = sims.outputs,
                        .simulations_run = sims.simulations_run,
                        .samples_excluded = sims.excluded};

  const auto n_targets = static_cast<Eigen::Index>(result.targets.size());
  std::vector<FitProblem> problems(static_cast<std::size_t>(n_targets));
  for (Eigen::Index t = 0; t < n_targets; ++t) {
    FitProblem& p = problems[static_cast<std::size_t>(t)];
    p.design = design;
    p.data = sims.outputs.col(t);
    p.weights = ladder;
    p.pdf_weights = lam;
    p.beta = config.beta;
    p.bounds = bounds;
    switch (config.variance_rule.kind) {
      case VarianceRule::Kind::None:
        break;
      case VarianceRule::Kind::Absolute:
        p.variance_bound = config.variance_rule.value;
        break;
      case VarianceRule::Kind::MultipleOfEmpirical:
        p.variance_bound = config.variance_rule.value * sample_variance(p.data);
        break;
    }
  }

  NormalCache cache = build_normal_cache(problems.front());
  std::vector<FitResult> fits(static_cast<std::size_t>(n_targets));
  parallel_for(n_targets, [&](long t) {
    fits[static_cast<std::size_t>(t)] =
        solve_pce(problems[static_cast<std::size_t>(t)], config.solver, &cache);
  });

  for (Eigen::Index t = 0; t < n_targets; ++t) {
    result.fits.push_back(fits[static_cast<std::size_t>(t)]);
    result.models.emplace_back(set, family, fits[static_cast<std::size_t>(t)].coefficients);
  }
  return result;
}

ConvergenceReport convergence_study(const RunConfig& config,
                                    const std::vector<Eigen::Index>& schedule,
                                    const TargetId& target) {
  if (schedule.empty()) throw ConfigError("convergence_study: empty schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1])
      throw ConfigError("convergence_study: schedule must be increasing");

  auto model = make_model(config);
  const BasisFamily family = paired_basis(model->input_family());
  const auto& targets = model->targets();
  Eigen::Index target_col = -1;
  for (std::size_t t = 0; t < targets.size(); ++t)
    if (targets[t].variable == target.variable && targets[t].time_index == target.time_index)
      target_col = static_cast<Eigen::Index>(t);
  if (target_col < 0) throw ConfigError("convergence_study: unknown target");

  // One batch at the largest nu; each stage fits on a prefix (keyed sampling
  // makes the nu-sample set a prefix of every larger set).
  SimulatedBatch sims = simulate_batch(*model, schedule.back(), config.seeds.sampling,
                                       config.max_failure_fraction);
  MultiIndexSet set(model->dimension(), config.max_degree);
  WeightLadder ladder = make_ladder(set, config.weights);

  ConvergenceReport report;
  report.target = target;

  std::vector<Eigen::VectorXd> coefs(schedule.size());
  std::optional<BoundConstraints> bounds;
  if (config.positivity_count > 0) {
    DistributionSpec spec{model->input_family(), model->dimension()};
    SampleBatch extra = draw_samples(spec, config.positivity_count, config.seeds.constraints);
    BoundConstraints b;
    b.rows = build_design_matrix(extra.samples, set, family).phi;
    b.lower = Eigen::VectorXd::Zero(config.positivity_count);
    b.upper = Eigen::VectorXd::Constant(config.positivity_count,
                                        std::numeric_limits<double>::infinity());
    bounds = std::move(b);
  }

  parallel_for(static_cast<long>(schedule.size()), [&](long s) {
    Eigen::Index nu = std::min<Eigen::Index>(schedule[static_cast<std::size_t>(s)],
                                             sims.samples.samples.rows());
    FitProblem p;
    p.design = build_design_matrix(sims.samples.samples.topRows(nu), set, family);
    p.data = sims.outputs.col(target_col).head(nu);
    p.weights = ladder;
    p.pdf_weights =
        fitting_pdf_weights(sims.samples.pdf_values.head(nu), config.normalize_pdf_weights);
    p.beta = config.beta;
    p.bounds = bounds;
    if (config.variance_rule.kind == VarianceRule::Kind::Absolute)
      p.variance_bound = config.variance_rule.value;
    else if (config.variance_rule.kind == VarianceRule::Kind::MultipleOfEmpirical)
      p.variance_bound = config.variance_rule.value * sample_variance(p.data);
    coefs[static_cast<std::size_t>(s)] = solve_pce(p, config.solver).coefficients;
  });

  report.nu_values.assign(schedule.begin(), schedule.end());
  report.coefficients = coefs;
  for (std::size_t s = 0; s + 1 < coefs.size(); ++s)
    report.distances.push_back(
        (coefs[s + 1] - coefs[s]).lpNorm<Eigen::Infinity>());

  report.chosen_nu = schedule.back();
  for (std::size_t s = 0; s + 1 < report.distances.size(); ++s) {
    double scale = coefs[s].lpNorm<Eigen::Infinity>();
    if (report.distances[s] < report.plateau_rtol * scale &&
        report.distances[s + 1] < report.plateau_rtol * scale) {
      report.chosen_nu = schedule[s];
      break;
    }
  }
  return report;
}

ValidationReport validate(const PipelineResult& result, const RunConfig& config,
                          Eigen::Index m_model, Eigen::Index m_pce, bool common_draws) {
  auto model = make_model(config);
  DistributionSpec spec{model->input_family(), model->dimension()};
  const auto n_targets = static_cast<Eigen::Index>(result.targets.size());

  ValidationReport report;
  report.model_runs = m_model;

  Eigen::MatrixXd model_out;
  SampleBatch vbatch;
  std::vector<char> failed;
  if (m_model > 0) {
    vbatch = draw_samples(spec, m_model, config.seeds.validation);
    model_out.resize(m_model, n_targets);
    failed.assign(static_cast<std::size_t>(m_model), 0);
    parallel_for(m_model, [&](long r) {
      try {
        model_out.row(r) = model->run(vbatch.samples.row(r), r);
      } catch (const SimulationError&) {
        failed[static_cast<std::size_t>(r)] = 1;
      }
    });
    report.model_runs_excluded = std::count(failed.begin(), failed.end(), 1);
  }

  // PCE evaluations: either at the same draws as the direct runs or at an
  // independent batch keyed by the pce_mc seed.
  Eigen::Index pce_count = common_draws ? m_model : m_pce;
  report.pce_evals = pce_count;
  Eigen::MatrixXd pce_out(pce_count, n_targets);
  if (pce_count > 0) {
    SampleBatch pbatch = common_draws
                             ? vbatch
                             : draw_samples(spec, pce_count, config.seeds.pce_mc);
    parallel_for(pce_count, [&](long r) {
      Eigen::VectorXd theta = pbatch.samples.row(r);
      for (Eigen::Index t = 0; t < n_targets; ++t)
        pce_out(r, t) = result.models[static_cast<std::size_t>(t)].evaluate(theta);
    });
  }

  for (Eigen::Index t = 0; t < n_targets; ++t) {
    TargetComparison cmp;
    cmp.id = result.targets[static_cast<std::size_t>(t)];
    if (m_model > 0) {
      Eigen::Index kept = m_model - report.model_runs_excluded;
      Eigen::VectorXd col(kept);
      Eigen::Index w = 0;
      for (Eigen::Index r = 0; r < m_model; ++r)
        if (!failed[static_cast<std::size_t>(r)]) col[w++] = model_out(r, t);
      cmp.model_mean = col.mean();
      cmp.model_variance = sample_variance(col);
      EmpiricalStats st = empirical_stats(col);
      cmp.model_q25 = st.q25;
      cmp.model_q50 = st.q50;
      cmp.model_q75 = st.q75;
      cmp.model_hist = std::move(st);
    }
    if (pce_count > 0) {
      Eigen::VectorXd col = pce_out.col(t);
      cmp.pce_mean = col.mean();
      cmp.pce_variance = sample_variance(col);
      EmpiricalStats st = empirical_stats(col);
      cmp.pce_q25 = st.q25;
      cmp.pce_q50 = st.q50;
      cmp.pce_q75 = st.q75;
      cmp.pce_hist = std::move(st);
    }
    report.comparisons.push_back(std::move(cmp));
  }
  return report;
}

LsComparisonReport ls_comparison(const PipelineResult& result) {
  LsComparisonReport report;
  DesignMatrix design =
      build_design_matrix(result.training.samples, result.index_set, result.family);
  for (std::size_t t = 0; t < result.targets.size(); ++t) {
    Eigen::VectorXd ls =
        solve_least_squares(design, result.training_outputs.col(static_cast<Eigen::Index>(t)));
    LsComparisonRow row;
    row.id = result.targets[t];
    row.convex_variance = result.models[t].variance();
    PceModel ls_model(result.index_set, result.family, ls);
    row.ls_variance = ls_model.variance();
    report.rows.push_back(row);
    report.ls_coefficients.push_back(std::move(ls));
  }
  return report;
}

}  // namespace pcx
