#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "doseopt/dgp_sim.hpp"
#include "doseopt/eval.hpp"
#include "doseopt/model_search.hpp"

namespace doseopt::cli {

// Full factorial benchmark specification. Methods: bfp_pmedian, bfp_pmean,
// bfp_best, gp, loess. The three bfp variants share one fit per cell.
struct BenchmarkConfig {
  std::vector<Scenario> scenarios = {Scenario::a, Scenario::b, Scenario::c,
                                     Scenario::d};
  std::vector<Family> families = {Family::gaussian, Family::bernoulli};
  std::vector<double> sigmas;  // empty: default_sigma_grid()
  std::vector<std::string> methods = {"bfp_pmedian", "bfp_pmean", "bfp_best", "gp",
                                      "loess"};
  int replicates = 5;
  std::uint64_t master_seed = 1;
  SearchMode search = SearchMode::mjmcmc;
  int iterations = 20000;
  int draws = 4000;
  int grid_points = 512;
  bool sigma_free = false;  // permit sigmas outside the declared grid
};

void validate_config(const BenchmarkConfig& config);

// All records for one benchmark cell (one simulated dataset, every method).
std::vector<BenchmarkRecord> run_cell(const BenchmarkConfig& config, Scenario scenario,
                                      Family family, double sigma, int replicate);

// Runs every cell, checkpointing each to `work_dir` so an interrupted run
// resumes without recomputing finished cells. Records come back in a fixed
// deterministic order regardless of scheduling or resumption. threads <= 0
// means thread_budget().
std::vector<BenchmarkRecord> run_benchmark(const BenchmarkConfig& config,
                                           const std::string& work_dir,
                                           int threads = 0);

}  // namespace doseopt::cli
