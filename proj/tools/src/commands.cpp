#include "doseopt_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "doseopt/dgp_sim.hpp"
#include "doseopt/errors.hpp"
#include "doseopt/eval.hpp"
#include "doseopt_cli/benchmark_runner.hpp"
#include "doseopt_cli/csv_io.hpp"
#include "doseopt_cli/pipeline.hpp"
#include "doseopt_cli/report_json.hpp"

namespace doseopt::cli {
namespace {

SearchMode search_from_string(const std::string& s) {
  if (s == "mjmcmc") return SearchMode::mjmcmc;
  if (s == "enumerate") return SearchMode::enumerate_all;
  throw std::invalid_argument("--search must be `mjmcmc` or `enumerate`, got `" + s +
                              "`");
}

// report.json -> report<suffix>; keeps any directory part.
std::string derived_path(const std::string& output, const std::string& suffix) {
  std::filesystem::path p(output);
  p.replace_extension();
  return p.string() + suffix;
}

void require_sigma_on_grid(double sigma, bool sigma_free) {
  if (sigma_free) return;
  const std::vector<double>& grid = default_sigma_grid();
  if (std::find(grid.begin(), grid.end(), sigma) == grid.end())
    throw std::invalid_argument(
        "sigma " + format_double(sigma) +
        " is not in the declared noise grid (pass --sigma-free to override)");
}

std::string table_row(const RankSummary& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-12s %9.1f %8.1f %8.1f %14.4f %12.4f %6lld",
                r.method.c_str(), r.rank_sum, r.rank_median, r.rank_iqr,
                r.mean_abs_bias, r.sd_abs_bias, static_cast<long long>(r.cells));
  return buf;
}

std::string table_row(const BootstrapComparison& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-12s %10.4f  [%8.4f, %8.4f]", r.method.c_str(),
                r.mean_diff, r.ci_low, r.ci_high);
  return buf;
}

struct FitArgs {
  std::string input;
  std::string family = "gaussian";
  std::string search = "mjmcmc";
  int iterations = 20000;
  std::uint64_t seed = 1;
  std::string g = "auto";
  double grid_min = 0.4;
  double grid_max = 30.0;
  int grid_points = 512;
  int draws = 4000;
  std::string estimator = "pmedian";
  int max_terms = -1;
  std::string output = "fit_report.json";
};

int do_fit(const FitArgs& args) {
  FitOptions options;
  options.family = family_from_string(args.family);
  options.search = search_from_string(args.search);
  options.iterations = args.iterations;
  options.seed = args.seed;
  options.g = args.g;
  options.grid_min = args.grid_min;
  options.grid_max = args.grid_max;
  options.grid_points = args.grid_points;
  options.draws = args.draws;
  options.estimator = estimator_from_string(args.estimator);
  options.max_terms = args.max_terms;

  const std::string raw = read_file(args.input);
  const DoseResponseData data = read_dataset_csv(raw, options.family);

  const auto start = std::chrono::steady_clock::now();
  const FitResult result = run_fit(data, options);
  const auto runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();

  const FitReport report = make_report(result, options, fnv1a64_hex(raw), runtime_ms);
  write_file(args.output, write_report_json(report));

  const std::string curve_path = derived_path(args.output, ".curve.csv");
  write_file(curve_path, write_curve_csv(result.curve));
  std::string response_path;
  if (result.response_curve) {
    response_path = derived_path(args.output, ".response_curve.csv");
    write_file(response_path, write_curve_csv(*result.response_curve));
  }

  std::cout << "n=" << data.n() << " family=" << to_string(options.family)
            << " search=" << args.search << " g=" << format_double(result.g_used)
            << " visited=" << result.ensemble.visited_count << "\n";
  if (!report.top_models.empty()) {
    std::cout << "hpm:";
    if (report.top_models[0].transforms.empty()) std::cout << " (intercept only)";
    for (const auto& t : report.top_models[0].transforms) std::cout << " " << t;
    std::cout << "  pmp=" << format_double(report.top_models[0].pmp) << "\n";
  }
  std::cout << "optimum (" << to_string(result.optimum.estimator)
            << "): " << format_double(result.optimum.point) << "  95% cri ["
            << format_double(result.optimum.cri_low) << ", "
            << format_double(result.optimum.cri_high) << "]\n";
  std::cout << "wrote " << args.output << ", " << curve_path;
  if (!response_path.empty()) std::cout << ", " << response_path;
  std::cout << "\n";
  return 0;
}

struct SimulateArgs {
  std::string scenario = "a";
  std::string family = "gaussian";
  double sigma = 1.0;
  std::uint64_t seed = 1;
  bool sigma_free = false;
  std::string output = "simulated.csv";
};

int do_simulate(const SimulateArgs& args) {
  require_sigma_on_grid(args.sigma, args.sigma_free);
  ScenarioSpec spec;
  spec.scenario = scenario_from_string(args.scenario);
  spec.family = family_from_string(args.family);
  spec.sigma = args.sigma;
  spec.seed = args.seed;
  const DoseResponseData data = simulate(spec);
  write_file(args.output, write_dataset_csv(data));
  std::cout << "wrote " << args.output << " (" << data.n() << " rows)\n";
  return 0;
}

struct BenchmarkArgs {
  std::vector<std::string> scenarios = {"a", "b", "c", "d"};
  std::vector<std::string> families = {"gaussian", "bernoulli"};
  std::vector<double> sigmas;
  std::vector<std::string> methods = {"bfp_pmedian", "bfp_pmean", "bfp_best", "gp",
                                      "loess"};
  int replicates = 5;
  std::uint64_t master_seed = 1;
  std::string search = "mjmcmc";
  int iterations = 20000;
  int draws = 4000;
  int grid_points = 512;
  bool sigma_free = false;
  std::string output = "benchmark.csv";
  std::string work_dir;
};

int do_benchmark(const BenchmarkArgs& args) {
  BenchmarkConfig config;
  config.scenarios.clear();
  for (const auto& s : args.scenarios)
    config.scenarios.push_back(scenario_from_string(s));
  config.families.clear();
  for (const auto& f : args.families) config.families.push_back(family_from_string(f));
  config.sigmas = args.sigmas;
  config.methods = args.methods;
  config.replicates = args.replicates;
  config.master_seed = args.master_seed;
  config.search = search_from_string(args.search);
  config.iterations = args.iterations;
  config.draws = args.draws;
  config.grid_points = args.grid_points;
  config.sigma_free = args.sigma_free;

  const std::string work_dir =
      args.work_dir.empty() ? args.output + ".cells" : args.work_dir;
  const std::vector<BenchmarkRecord> records = run_benchmark(config, work_dir);
  write_file(args.output, write_benchmark_csv(records));
  std::cout << "wrote " << args.output << " (" << records.size() << " rows, cells in "
            << work_dir << ")\n";
  return 0;
}

struct ReportArgs {
  std::string input;
  std::string reference = "loess";
  int resamples = 2000;
  std::uint64_t seed = 1;
  std::string output = "report";
};

int do_report(const ReportArgs& args) {
  const std::vector<BenchmarkRecord> records =
      read_benchmark_csv(read_file(args.input));

  const std::vector<RankSummary> ranks = rank_table(records);
  const std::vector<BootstrapComparison> bootstrap =
      paired_bootstrap(records, args.reference, args.resamples, args.seed);
  const std::vector<SettingBias> settings = setting_bias_table(records);

  write_file(args.output + "_ranks.csv", write_rank_csv(ranks));
  write_file(args.output + "_bootstrap.csv", write_bootstrap_csv(bootstrap));
  write_file(args.output + "_settings.csv", write_setting_bias_csv(settings));

  std::cout << "method          rank_sum rank_med rank_iqr  mean_abs_bias  "
               "sd_abs_bias  cells\n";
  for (const auto& row : ranks) std::cout << table_row(row) << "\n";
  std::cout << "\npaired bootstrap vs " << args.reference
            << " (abs_bias diff, 95% CI)\n";
  for (const auto& row : bootstrap) std::cout << table_row(row) << "\n";
  std::cout << "\nwrote " << args.output << "_ranks.csv, " << args.output
            << "_bootstrap.csv, " << args.output << "_settings.csv\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "Dose-response curve estimation and optimal-dose inference with "
      "Bayesian fractional polynomials"};
  app.require_subcommand(1);

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand(
      "fit", "Fit a dose-response dataset and report the optimal dose");
  fit->add_option("input", fit_args.input, "dataset CSV (dose,response)")
      ->required()
      ->check(CLI::ExistingFile);
  fit->add_option("--family", fit_args.family, "gaussian | bernoulli");
  fit->add_option("--search", fit_args.search, "mjmcmc | enumerate");
  fit->add_option("--iterations", fit_args.iterations, "mjmcmc iterations");
  fit->add_option("--seed", fit_args.seed, "search and draw seed");
  fit->add_option("--g", fit_args.g, "shrinkage: auto | eb | positive number");
  fit->add_option("--grid-min", fit_args.grid_min, "curve grid lower dose");
  fit->add_option("--grid-max", fit_args.grid_max, "curve grid upper dose");
  fit->add_option("--grid-points", fit_args.grid_points, "curve grid size");
  fit->add_option("--draws", fit_args.draws, "posterior curve draws");
  fit->add_option("--estimator", fit_args.estimator, "pmedian | pmean | hpm-curve");
  fit->add_option("--max-terms", fit_args.max_terms,
                  "model size cap (-1: from distinct doses)");
  fit->add_option("--output", fit_args.output, "report JSON path");

  SimulateArgs sim_args;
  CLI::App* sim =
      app.add_subcommand("simulate", "Draw a synthetic dose-response dataset");
  sim->add_option("--scenario", sim_args.scenario, "a | b | c | d")->required();
  sim->add_option("--family", sim_args.family, "gaussian | bernoulli");
  sim->add_option("--sigma", sim_args.sigma, "noise level");
  sim->add_option("--seed", sim_args.seed, "rng seed");
  sim->add_flag("--sigma-free", sim_args.sigma_free,
                "allow sigma outside the declared noise grid");
  sim->add_option("--output", sim_args.output, "dataset CSV path");

  BenchmarkArgs bench_args;
  CLI::App* bench = app.add_subcommand(
      "benchmark", "Run the factorial method-comparison benchmark");
  bench->add_option("--scenarios", bench_args.scenarios, "subset of a,b,c,d")
      ->delimiter(',');
  bench->add_option("--families", bench_args.families, "subset of gaussian,bernoulli")
      ->delimiter(',');
  bench->add_option("--sigmas", bench_args.sigmas, "noise levels (default: full grid)")
      ->delimiter(',');
  bench->add_option("--methods", bench_args.methods,
                    "subset of bfp_pmedian,bfp_pmean,bfp_best,gp,loess")
      ->delimiter(',');
  bench->add_option("--replicates", bench_args.replicates, "replicates per cell");
  bench->add_option("--master-seed", bench_args.master_seed,
                    "seed all cell seeds derive from");
  bench->add_option("--search", bench_args.search, "mjmcmc | enumerate");
  bench->add_option("--iterations", bench_args.iterations, "mjmcmc iterations");
  bench->add_option("--draws", bench_args.draws, "posterior curve draws");
  bench->add_option("--grid-points", bench_args.grid_points, "curve grid size");
  bench->add_flag("--sigma-free", bench_args.sigma_free,
                  "allow sigmas outside the declared noise grid");
  bench->add_option("--output", bench_args.output, "benchmark CSV path");
  bench->add_option("--work-dir", bench_args.work_dir,
                    "checkpoint directory (default: <output>.cells)");

  ReportArgs report_args;
  CLI::App* report = app.add_subcommand(
      "report", "Rank methods and bootstrap comparisons from a benchmark CSV");
  report->add_option("--input", report_args.input, "benchmark CSV")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--reference", report_args.reference,
                     "method the bootstrap compares against");
  report->add_option("--resamples", report_args.resamples, "bootstrap resamples");
  report->add_option("--seed", report_args.seed, "bootstrap seed");
  report->add_option("--output", report_args.output, "output CSV prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the error message
    return code == 0 ? 0 : 2;
  }

  try {
    if (*fit) return do_fit(fit_args);
    if (*sim) return do_simulate(sim_args);
    if (*bench) return do_benchmark(bench_args);
    if (*report) return do_report(report_args);
    return 2;
  } catch (const InfeasibleModelSpaceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const MissingCellError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace doseopt::cli
