#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "doseopt_cli/pipeline.hpp"

namespace doseopt::cli {

inline constexpr int kFitReportSchemaVersion = 1;

struct TopModel {
  std::vector<std::string> transforms;  // names, ascending by index
  double pmp = 0.0;
  double log_evidence = 0.0;
};

// Serializable summary of one fit. Readers tolerate unknown fields but
// reject other schema versions.
struct FitReport {
  int schema_version = kFitReportSchemaVersion;
  std::string input_digest;  // fnv1a-64 of the raw input bytes, hex
  Family family = Family::gaussian;
  SearchMode search = SearchMode::mjmcmc;
  std::uint64_t seed = 0;
  double g = 0.0;
  int max_terms = 0;
  std::uint64_t visited_models = 0;
  std::vector<TopModel> top_models;  // descending pmp, capped
  CurveSummary curve;
  std::vector<double> hpm_curve;
  OptimumPosterior optimum;
  std::int64_t runtime_ms = 0;
};

std::string fnv1a64_hex(const std::string& bytes);

FitReport make_report(const FitResult& result, const FitOptions& options,
                      const std::string& input_digest, std::int64_t runtime_ms,
                      std::size_t top_models_cap = 10);

std::string write_report_json(const FitReport& report);
FitReport read_report_json(const std::string& text);

}  // namespace doseopt::cli
