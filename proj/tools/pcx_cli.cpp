// Command-line front end: Algorithm-2 pipeline (sample / simulate / fit),
// moment and Monte-Carlo queries on fitted expansions, validation against
// direct simulation, the nu-convergence study, KL expansion tables and the
// least-squares comparison.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pcx/io.hpp"
#include "pcx/parallel.hpp"

namespace fs = std::filesystem;

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string model_name;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

pcx::RunConfig resolve_config(const GlobalArgs& args) {
  pcx::RunConfig config;
  if (!args.config_path.empty()) {
    config = pcx::load_run_config(args.config_path);
  } else if (!args.model_name.empty()) {
    config = pcx::default_config(args.model_name);
  } else {
    throw pcx::ConfigError("either --config or --model is required");
  }
  if (args.seed_set) config.seeds.sampling = args.seed;
  return config;
}

std::vector<Eigen::Index> parse_schedule(const std::string& text) {
  std::vector<Eigen::Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse polynomial chaos estimation from sampled simulations"};
  app.require_subcommand(1);

  GlobalArgs args;
  app.add_option("--config", args.config_path, "JSON run configuration");
  app.add_option("--model", args.model_name,
                 "model preset when no config file is given (rlc|innovation|oscillator)");
  app.add_option("--out", args.out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", args.seed, "override the sampling seed");

  auto* cmd_sample = app.add_subcommand("sample", "draw input samples, write CSV + metadata");
  Eigen::Index sample_count = -1;
  cmd_sample->add_option("--count", sample_count, "number of samples (default: config nu)");

  auto* cmd_simulate =
      app.add_subcommand("simulate", "run the model once per sample, write outputs CSV");
  Eigen::Index simulate_count = -1;
  cmd_simulate->add_option("--count", simulate_count, "number of runs (default: config nu)");

  app.add_subcommand("fit", "full pipeline: sample, simulate, fit, write models");

  auto* cmd_moments = app.add_subcommand("moments", "mean/variance of saved models");
  std::vector<std::string> model_files;
  cmd_moments->add_option("files", model_files, "model files (*.pce)")->required();

  auto* cmd_mc = app.add_subcommand("mc", "Monte Carlo over a saved model");
  std::string mc_model_file;
  Eigen::Index mc_count = 100000;
  std::uint64_t mc_seed = 4;
  cmd_mc->add_option("file", mc_model_file, "model file")->required();
  cmd_mc->add_option("--count", mc_count, "number of evaluations");
  cmd_mc->add_option("--mc-seed", mc_seed, "stream seed");

  auto* cmd_validate =
      app.add_subcommand("validate", "fit, then compare PCE statistics with direct MC");
  Eigen::Index m_model = 10000, m_pce = 10000;
  bool common_draws = false;
  cmd_validate->add_option("--m-model", m_model, "direct simulation count");
  cmd_validate->add_option("--m-pce", m_pce, "PCE evaluation count");
  cmd_validate->add_flag("--common-draws", common_draws,
                         "evaluate the PCE at the same draws as the direct runs");

  auto* cmd_converge = app.add_subcommand("converge", "coefficient distance vs sample count");
  std::string schedule_text = "5,10,15,20,25,30,35,40,45,50";
  std::string target_text = "v_C:5";
  cmd_converge->add_option("--schedule", schedule_text, "comma-separated nu values");
  cmd_converge->add_option("--target", target_text, "variable:time_index");

  auto* cmd_kl = app.add_subcommand("kl", "KL eigen-frequency table and covariance grid");
  int kl_terms = 10, kl_grid = 50;
  double kl_sigma = 1.0, kl_mu = 50.0, kl_half_width = 0.02;
  cmd_kl->add_option("--terms", kl_terms, "number of KL terms");
  cmd_kl->add_option("--grid", kl_grid, "covariance grid resolution");
  cmd_kl->add_option("--sigma", kl_sigma, "process standard deviation");
  cmd_kl->add_option("--mu", kl_mu, "inverse correlation length");
  cmd_kl->add_option("--half-width", kl_half_width, "expansion half-interval T");

  app.add_subcommand("compare-ls", "convex fit vs least squares on shared data");

  CLI11_PARSE(app, argc, argv);
  args.seed_set = seed_opt->count() > 0;

  try {
    fs::create_directories(args.out_dir);

    if (cmd_kl->parsed()) {
      pcx::KlBasis basis = pcx::build_kl_basis(
          pcx::ExpCovarianceSpec{kl_sigma, kl_mu, kl_half_width}, kl_terms,
          1.0 / std::sqrt(3.0));
      pcx::write_kl_basis(args.out_dir + "/kl_basis.txt", basis);
      pcx::write_kl_covariance_grid(args.out_dir + "/kl_covariance.csv", basis, kl_grid);
      std::cout << "wrote " << args.out_dir << "/kl_basis.txt and kl_covariance.csv\n";
      return 0;
    }

    if (cmd_moments->parsed()) {
      std::cout << "file,mean,variance\n";
      for (const auto& f : model_files) {
        std::ifstream is(f);
        if (!is) throw pcx::Error("cannot open model file: " + f);
        pcx::PceModel model = pcx::PceModel::load(is);
        std::cout << f << ',' << pcx::format_full(model.mean()) << ','
                  << pcx::format_full(model.variance()) << '\n';
      }
      return 0;
    }

    if (cmd_mc->parsed()) {
      std::ifstream is(mc_model_file);
      if (!is) throw pcx::Error("cannot open model file: " + mc_model_file);
      pcx::PceModel model = pcx::PceModel::load(is);
      Eigen::VectorXd draws = model.mc(mc_count, mc_seed);
      std::ofstream os(args.out_dir + "/pce_mc.csv");
      os << "value\n";
      for (Eigen::Index i = 0; i < draws.size(); ++i)
        os << pcx::format_full(draws[i]) << '\n';
      pcx::EmpiricalStats st = pcx::empirical_stats(draws);
      std::cout << "count," << draws.size() << "\nmean," << pcx::format_full(draws.mean())
                << "\nq25," << pcx::format_full(st.q25) << "\nq50,"
                << pcx::format_full(st.q50) << "\nq75," << pcx::format_full(st.q75) << '\n';
      return 0;
    }

    pcx::RunConfig config = resolve_config(args);

    if (cmd_sample->parsed()) {
      auto model = pcx::make_model(config);
      pcx::DistributionSpec spec{model->input_family(), model->dimension()};
      Eigen::Index count = sample_count > 0 ? sample_count : config.nu;
      pcx::SampleBatch batch = pcx::draw_samples(spec, count, config.seeds.sampling);
      pcx::write_sample_csv(args.out_dir + "/samples.csv", batch);
      pcx::write_sample_meta(args.out_dir + "/samples.meta.json", batch, spec);
      std::cout << "wrote " << count << " samples to " << args.out_dir << "/samples.csv\n";
      return 0;
    }

    if (cmd_simulate->parsed()) {
      auto model = pcx::make_model(config);
      pcx::DistributionSpec spec{model->input_family(), model->dimension()};
      Eigen::Index count = simulate_count > 0 ? simulate_count : config.nu;
      pcx::SampleBatch batch = pcx::draw_samples(spec, count, config.seeds.sampling);
      Eigen::MatrixXd outputs(count, model->targets().size());
      pcx::parallel_for(count, [&](long r) {
        outputs.row(r) = model->run(batch.samples.row(r), r);
      });
      pcx::write_sample_csv(args.out_dir + "/samples.csv", batch);
      pcx::write_sample_meta(args.out_dir + "/samples.meta.json", batch, spec);
      pcx::write_outputs_csv(args.out_dir + "/outputs.csv", model->targets(), outputs);
      std::cout << "wrote " << count << " runs to " << args.out_dir << "/outputs.csv\n";
      return 0;
    }

    if (app.get_subcommand("fit")->parsed()) {
      pcx::PipelineResult result = pcx::run_pipeline(config);
      pcx::write_pce_models(args.out_dir, result);
      pcx::write_fit_report(args.out_dir + "/fit_report.json", result);
      std::cout << "fitted " << result.targets.size() << " targets ("
                << result.simulations_run << " simulations, " << result.samples_excluded
                << " excluded)\n";
      return 0;
    }

    if (cmd_validate->parsed()) {
      pcx::PipelineResult result = pcx::run_pipeline(config);
      pcx::write_pce_models(args.out_dir, result);
      pcx::write_fit_report(args.out_dir + "/fit_report.json", result);
      pcx::ValidationReport report =
          pcx::validate(result, config, m_model, m_pce, common_draws);
      pcx::write_validation_csv(args.out_dir + "/validation.csv", report);
      pcx::write_validation_histograms(args.out_dir + "/histograms.csv", report);
      std::cout << "validation written to " << args.out_dir << "/validation.csv ("
                << report.model_runs << " direct runs, " << report.pce_evals
                << " PCE evaluations)\n";
      return 0;
    }

    if (cmd_converge->parsed()) {
      auto colon = target_text.find(':');
      if (colon == std::string::npos)
        throw pcx::ConfigError("--target must look like variable:time_index");
      pcx::TargetId target{target_text.substr(0, colon),
                           std::stoi(target_text.substr(colon + 1))};
      pcx::ConvergenceReport report =
          pcx::convergence_study(config, parse_schedule(schedule_text), target);
      pcx::write_convergence_report(args.out_dir + "/convergence.csv",
                                    args.out_dir + "/convergence.json", report);
      std::cout << "chosen nu: " << report.chosen_nu << '\n';
      return 0;
    }

    if (app.get_subcommand("compare-ls")->parsed()) {
      pcx::PipelineResult result = pcx::run_pipeline(config);
      pcx::LsComparisonReport report = pcx::ls_comparison(result);
      pcx::write_ls_comparison_csv(args.out_dir + "/compare_ls.csv", report);
      std::cout << "wrote " << args.out_dir << "/compare_ls.csv\n";
      return 0;
    }

    throw pcx::ConfigError("no subcommand handled");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
