#pragma once

#include <string>
#include <vector>

#include "doseopt/bma.hpp"
#include "doseopt/data.hpp"
#include "doseopt/eval.hpp"

namespace doseopt::cli {

// Parse failure with the 1-based input line in the message.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal form of a double.
std::string format_double(double value);
double parse_double(const std::string& field, int line);

// Dataset CSV: header `dose,response`, one observation per row.
std::string write_dataset_csv(const DoseResponseData& data);
DoseResponseData read_dataset_csv(const std::string& text, Family family);

// Benchmark CSV: header
// `method,scenario,family,sigma,replicate,estimated_optimum,true_optimum,abs_bias`.
std::string write_benchmark_csv(const std::vector<BenchmarkRecord>& records);
std::vector<BenchmarkRecord> read_benchmark_csv(const std::string& text);

// Curve CSV: header `dose,mean,lower,median,upper`.
std::string write_curve_csv(const CurveSummary& summary);
CurveSummary read_curve_csv(const std::string& text);

// Rank table CSV: header
// `method,rank_sum,rank_median,rank_iqr,mean_abs_bias,sd_abs_bias,cells`.
std::string write_rank_csv(const std::vector<RankSummary>& rows);

// Bootstrap CSV: header `method,mean_diff,ci_low,ci_high`.
std::string write_bootstrap_csv(const std::vector<BootstrapComparison>& rows);

// Per-setting bias CSV: header
// `scenario,family,sigma,method,mean_abs_bias,min_abs_bias,max_abs_bias`.
struct SettingBias {
  Scenario scenario = Scenario::a;
  Family family = Family::gaussian;
  double sigma = 0.0;
  std::string method;
  double mean_abs_bias = 0.0;
  double min_abs_bias = 0.0;
  double max_abs_bias = 0.0;
};
std::vector<SettingBias> setting_bias_table(const std::vector<BenchmarkRecord>& records);
std::string write_setting_bias_csv(const std::vector<SettingBias>& rows);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace doseopt::cli
