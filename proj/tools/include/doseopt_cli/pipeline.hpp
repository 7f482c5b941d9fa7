#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "doseopt/bma.hpp"
#include "doseopt/data.hpp"
#include "doseopt/model_search.hpp"

namespace doseopt::cli {

// One fit configuration, shared by `fit`, the benchmark runner, and the
// acceptance harness so they cannot drift apart.
struct FitOptions {
  Family family = Family::gaussian;
  SearchMode search = SearchMode::mjmcmc;
  int iterations = 20000;
  std::uint64_t seed = 1;
  std::string g = "auto";  // "auto" | "eb" | positive number
  double grid_min = 0.4;
  double grid_max = 30.0;
  int grid_points = 512;
  int draws = 4000;
  Estimator estimator = Estimator::pmedian;
  int max_terms = -1;  // -1: default_max_terms(data)
};

// "auto" -> default_g(n); "eb" -> empirical_bayes_g; otherwise parsed as a
// positive real. Throws std::invalid_argument on anything else.
double resolve_g(const std::string& spec, const DoseResponseData& data);

struct FitResult {
  PosteriorEnsemble ensemble;
  DoseGrid grid;
  CurveSummary curve;                          // linear-predictor scale
  std::optional<CurveSummary> response_curve;  // Bernoulli only
  Eigen::VectorXd hpm_curve_values;
  OptimumPosterior optimum;
  double g_used = 0.0;
  int max_terms_used = 0;
};

FitResult run_fit(const DoseResponseData& data, const FitOptions& options);

}  // namespace doseopt::cli
