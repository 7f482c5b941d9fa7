#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "doseopt/data.hpp"
#include "doseopt/dgp_sim.hpp"

namespace doseopt {

// One benchmark outcome: a method's estimated optimum on one simulated cell.
struct BenchmarkRecord {
  std::string method;
  Scenario scenario = Scenario::a;
  Family family = Family::gaussian;
  double sigma = 0.0;
  int replicate = 0;
  double estimated_optimum = 0.0;
  double true_optimum = 0.0;
  double abs_bias = 0.0;
};

BenchmarkRecord make_record(std::string method, Scenario s, Family f, double sigma,
                            int replicate, double estimated, double truth);

struct RankSummary {
  std::string method;
  double rank_sum = 0.0;
  double rank_median = 0.0;
  double rank_iqr = 0.0;
  double mean_abs_bias = 0.0;
  double sd_abs_bias = 0.0;
  std::int64_t cells = 0;
};

// Ranks methods within each (scenario, family, sigma, replicate) cell by
// ascending abs_bias, sharing average ranks on exact ties, and aggregates
// per method. Every method must appear in every cell; a gap raises
// MissingCellError naming the cell. Rows come back sorted by rank_sum
// ascending (method name breaks ties).
std::vector<RankSummary> rank_table(const std::vector<BenchmarkRecord>& records);

struct BootstrapComparison {
  std::string method;
  double mean_diff = 0.0;  // mean over cells of abs_bias - reference abs_bias
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Paired percentile bootstrap over cells against a reference method. One
// index resample per replicate is shared by all methods. resamples >= 1000.
// The reference row is exactly (0, [0, 0]).
std::vector<BootstrapComparison> paired_bootstrap(
    const std::vector<BenchmarkRecord>& records, const std::string& reference,
    int resamples = 2000, std::uint64_t seed = 1);

}  // namespace doseopt
