#include "doseopt_cli/report_json.hpp"

#include <cstdio>

#include <json.hpp>

#include "doseopt/fp_basis.hpp"
#include "doseopt_cli/csv_io.hpp"

namespace doseopt::cli {

namespace {

using nlohmann::json;

json curve_to_json(const CurveSummary& curve) {
  json j;
  j["scale"] = curve.scale == CurveScale::response ? "response" : "linear-predictor";
  j["dose"] = curve.grid.values;
  j["mean"] = std::vector<double>(curve.mean.begin(), curve.mean.end());
  j["lower"] = std::vector<double>(curve.lower.begin(), curve.lower.end());
  j["median"] = std::vector<double>(curve.median.begin(), curve.median.end());
  j["upper"] = std::vector<double>(curve.upper.begin(), curve.upper.end());
  return j;
}

CurveSummary curve_from_json(const json& j, Family family) {
  CurveSummary curve;
  curve.family = family;
  curve.scale = j.at("scale").get<std::string>() == "response"
                    ? CurveScale::response
                    : CurveScale::linear_predictor;
  curve.grid.values = j.at("dose").get<std::vector<double>>();
  if (curve.grid.values.empty()) throw ParseError("report curve has no grid points");
  curve.grid.points = static_cast<int>(curve.grid.values.size());
  curve.grid.x_min = curve.grid.values.front();
  curve.grid.x_max = curve.grid.values.back();
  const auto vec = [&](const char* key) {
    const auto v = j.at(key).get<std::vector<double>>();
    if (v.size() != curve.grid.values.size())
      throw ParseError(std::string("report curve field `") + key +
                       "` length mismatch");
    return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()).eval();
  };
  curve.mean = vec("mean");
  curve.lower = vec("lower");
  curve.median = vec("median");
  curve.upper = vec("upper");
  return curve;
}

}  // namespace

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf);
}

FitReport make_report(const FitResult& result, const FitOptions& options,
                      const std::string& input_digest, std::int64_t runtime_ms,
                      std::size_t top_models_cap) {
  FitReport report;
  report.input_digest = input_digest;
  report.family = options.family;
  report.search = options.search;
  report.seed = options.seed;
  report.g = result.g_used;
  report.max_terms = result.max_terms_used;
  report.visited_models = result.ensemble.visited_count;
  const std::size_t count = std::min(top_models_cap, result.ensemble.entries.size());
  for (std::size_t i = 0; i < count; ++i) {
    const auto& entry = result.ensemble.entries[i];
    TopModel tm;
    for (int k : entry.gamma.active()) tm.transforms.push_back(transform_name(k));
    tm.pmp = entry.pmp;
    tm.log_evidence = entry.log_evidence;
    report.top_models.push_back(std::move(tm));
  }
  report.curve = result.curve;
  report.hpm_curve.assign(result.hpm_curve_values.begin(),
                          result.hpm_curve_values.end());
  report.optimum = result.optimum;
  report.runtime_ms = runtime_ms;
  return report;
}

std::string write_report_json(const FitReport& report) {
  json j;
  j["schema_version"] = report.schema_version;
  j["input_digest"] = report.input_digest;
  j["family"] = to_string(report.family);
  j["search"] =
      report.search == SearchMode::enumerate_all ? "enumerate" : "mjmcmc";
  j["seed"] = report.seed;
  j["g"] = report.g;
  j["max_terms"] = report.max_terms;
  j["visited_models"] = report.visited_models;
  j["top_models"] = json::array();
  for (const auto& tm : report.top_models) {
    json m;
    m["transforms"] = tm.transforms;
    m["pmp"] = tm.pmp;
    m["log_evidence"] = tm.log_evidence;
    j["top_models"].push_back(std::move(m));
  }
  j["curve"] = curve_to_json(report.curve);
  j["hpm_curve"] = report.hpm_curve;
  json opt;
  opt["estimator"] = to_string(report.optimum.estimator);
  opt["point"] = report.optimum.point;
  opt["cri_low"] = report.optimum.cri_low;
  opt["cri_high"] = report.optimum.cri_high;
  opt["samples"] = report.optimum.samples;
  j["optimum"] = std::move(opt);
  j["runtime_ms"] = report.runtime_ms;
  return j.dump(2) + "\n";
}

FitReport read_report_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("report JSON: ") + e.what());
  }
  try {
    FitReport report;
    report.schema_version = j.at("schema_version").get<int>();
    if (report.schema_version != kFitReportSchemaVersion)
      throw ParseError("unsupported report schema_version " +
                       std::to_string(report.schema_version) + ", expected " +
                       std::to_string(kFitReportSchemaVersion));
    report.input_digest = j.at("input_digest").get<std::string>();
    report.family = family_from_string(j.at("family").get<std::string>());
    report.search = j.at("search").get<std::string>() == "enumerate"
                        ? SearchMode::enumerate_all
                        : SearchMode::mjmcmc;
    report.seed = j.at("seed").get<std::uint64_t>();
    report.g = j.at("g").get<double>();
    report.max_terms = j.at("max_terms").get<int>();
    report.visited_models = j.at("visited_models").get<std::uint64_t>();
    for (const auto& m : j.at("top_models")) {
      TopModel tm;
      tm.transforms = m.at("transforms").get<std::vector<std::string>>();
      tm.pmp = m.at("pmp").get<double>();
      tm.log_evidence = m.at("log_evidence").get<double>();
      report.top_models.push_back(std::move(tm));
    }
    report.curve = curve_from_json(j.at("curve"), report.family);
    report.hpm_curve = j.at("hpm_curve").get<std::vector<double>>();
    const auto& opt = j.at("optimum");
    report.optimum.estimator =
        estimator_from_string(opt.at("estimator").get<std::string>());
    report.optimum.point = opt.at("point").get<double>();
    report.optimum.cri_low = opt.at("cri_low").get<double>();
    report.optimum.cri_high = opt.at("cri_high").get<double>();
    report.optimum.samples = opt.at("samples").get<std::vector<double>>();
    report.runtime_ms = j.at("runtime_ms").get<std::int64_t>();
    return report;
  } catch (const json::exception& e) {
    throw ParseError(std::string("report JSON: ") + e.what());
  }
}

}  // namespace doseopt::cli
