#include "doseopt_cli/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace doseopt::cli {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

// Lines of the input, trailing blank lines ignored. Keeps 1-based numbering.
struct Cursor {
  std::vector<std::pair<int, std::string>> lines;

  explicit Cursor(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
      ++number;
      std::string stripped = line;
      if (!stripped.empty() && stripped.back() == '\r') stripped.pop_back();
      if (stripped.empty()) continue;
      lines.emplace_back(number, stripped);
    }
  }
};

void expect_header(const Cursor& cursor, const std::string& expected) {
  if (cursor.lines.empty())
    throw ParseError("line 1: empty input, expected header `" + expected + "`");
  const auto& [number, line] = cursor.lines.front();
  if (line != expected)
    throw ParseError("line " + std::to_string(number) + ": expected header `" +
                     expected + "`, got `" + line + "`");
}

std::vector<std::string> expect_fields(const std::pair<int, std::string>& entry,
                                       std::size_t count) {
  auto fields = split_fields(entry.second);
  if (fields.size() != count)
    throw ParseError("line " + std::to_string(entry.first) + ": expected " +
                     std::to_string(count) + " fields, got " +
                     std::to_string(fields.size()));
  return fields;
}

int parse_int(const std::string& field, int line) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError("line " + std::to_string(line) + ": bad integer `" + field + "`");
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& field, int line) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError("line " + std::to_string(line) + ": bad number `" + field + "`");
  return value;
}

std::string write_dataset_csv(const DoseResponseData& data) {
  std::string out = "dose,response\n";
  for (int i = 0; i < data.n(); ++i) {
    out += format_double(data.doses[i]);
    out += ',';
    out += format_double(data.responses[i]);
    out += '\n';
  }
  return out;
}

DoseResponseData read_dataset_csv(const std::string& text, Family family) {
  const Cursor cursor(text);
  expect_header(cursor, "dose,response");
  DoseResponseData data;
  data.family = family;
  const std::size_t n = cursor.lines.size() - 1;
  data.doses.resize(n);
  data.responses.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& entry = cursor.lines[i + 1];
    const auto fields = expect_fields(entry, 2);
    data.doses[i] = parse_double(fields[0], entry.first);
    data.responses[i] = parse_double(fields[1], entry.first);
  }
  return data;
}

std::string write_benchmark_csv(const std::vector<BenchmarkRecord>& records) {
  std::string out =
      "method,scenario,family,sigma,replicate,estimated_optimum,true_optimum,abs_bias\n";
  for (const auto& r : records) {
    out += r.method;
    out += ',';
    out += to_string(r.scenario);
    out += ',';
    out += to_string(r.family);
    out += ',';
    out += format_double(r.sigma);
    out += ',';
    out += std::to_string(r.replicate);
    out += ',';
    out += format_double(r.estimated_optimum);
    out += ',';
    out += format_double(r.true_optimum);
    out += ',';
    out += format_double(r.abs_bias);
    out += '\n';
  }
  return out;
}

std::vector<BenchmarkRecord> read_benchmark_csv(const std::string& text) {
  const Cursor cursor(text);
  expect_header(
      cursor,
      "method,scenario,family,sigma,replicate,estimated_optimum,true_optimum,abs_bias");
  std::vector<BenchmarkRecord> records;
  records.reserve(cursor.lines.size() - 1);
  for (std::size_t i = 1; i < cursor.lines.size(); ++i) {
    const auto& entry = cursor.lines[i];
    const auto fields = expect_fields(entry, 8);
    BenchmarkRecord r;
    r.method = fields[0];
    try {
      r.scenario = scenario_from_string(fields[1]);
      r.family = family_from_string(fields[2]);
    } catch (const std::invalid_argument& e) {
      throw ParseError("line " + std::to_string(entry.first) + ": " + e.what());
    }
    r.sigma = parse_double(fields[3], entry.first);
    r.replicate = parse_int(fields[4], entry.first);
    r.estimated_optimum = parse_double(fields[5], entry.first);
    r.true_optimum = parse_double(fields[6], entry.first);
    r.abs_bias = parse_double(fields[7], entry.first);
    records.push_back(std::move(r));
  }
  return records;
}

std::string write_curve_csv(const CurveSummary& summary) {
  std::string out = "dose,mean,lower,median,upper\n";
  for (int j = 0; j < summary.grid.points; ++j) {
    out += format_double(summary.grid.values[j]);
    out += ',';
    out += format_double(summary.mean[j]);
    out += ',';
    out += format_double(summary.lower[j]);
    out += ',';
    out += format_double(summary.median[j]);
    out += ',';
    out += format_double(summary.upper[j]);
    out += '\n';
  }
  return out;
}

CurveSummary read_curve_csv(const std::string& text) {
  const Cursor cursor(text);
  expect_header(cursor, "dose,mean,lower,median,upper");
  const int n = static_cast<int>(cursor.lines.size()) - 1;
  if (n < 1) throw ParseError("line 2: curve needs at least one row");
  CurveSummary s;
  s.grid.points = n;
  s.grid.values.resize(n);
  s.mean.resize(n);
  s.lower.resize(n);
  s.median.resize(n);
  s.upper.resize(n);
  for (int j = 0; j < n; ++j) {
    const auto& entry = cursor.lines[j + 1];
    const auto fields = expect_fields(entry, 5);
    s.grid.values[j] = parse_double(fields[0], entry.first);
    s.mean[j] = parse_double(fields[1], entry.first);
    s.lower[j] = parse_double(fields[2], entry.first);
    s.median[j] = parse_double(fields[3], entry.first);
    s.upper[j] = parse_double(fields[4], entry.first);
  }
  s.grid.x_min = s.grid.values.front();
  s.grid.x_max = s.grid.values.back();
  return s;
}

std::string write_rank_csv(const std::vector<RankSummary>& rows) {
  std::string out =
      "method,rank_sum,rank_median,rank_iqr,mean_abs_bias,sd_abs_bias,cells\n";
  for (const auto& r : rows) {
    out += r.method;
    out += ',';
    out += format_double(r.rank_sum);
    out += ',';
    out += format_double(r.rank_median);
    out += ',';
    out += format_double(r.rank_iqr);
    out += ',';
    out += format_double(r.mean_abs_bias);
    out += ',';
    out += format_double(r.sd_abs_bias);
    out += ',';
    out += std::to_string(r.cells);
    out += '\n';
  }
  return out;
}

std::string write_bootstrap_csv(const std::vector<BootstrapComparison>& rows) {
  std::string out = "method,mean_diff,ci_low,ci_high\n";
  for (const auto& r : rows) {
    out += r.method;
    out += ',';
    out += format_double(r.mean_diff);
    out += ',';
    out += format_double(r.ci_low);
    out += ',';
    out += format_double(r.ci_high);
    out += '\n';
  }
  return out;
}

std::vector<SettingBias> setting_bias_table(const std::vector<BenchmarkRecord>& records) {
  struct Key {
    Scenario s;
    Family f;
    double sigma;
    std::string method;
    bool operator<(const Key& o) const {
      if (s != o.s) return s < o.s;
      if (f != o.f) return f < o.f;
      if (sigma != o.sigma) return sigma < o.sigma;
      return method < o.method;
    }
  };
  std::map<Key, std::vector<double>> cells;
  for (const auto& r : records)
    cells[{r.scenario, r.family, r.sigma, r.method}].push_back(r.abs_bias);
  std::vector<SettingBias> rows;
  rows.reserve(cells.size());
  for (const auto& [key, biases] : cells) {
    SettingBias row;
    row.scenario = key.s;
    row.family = key.f;
    row.sigma = key.sigma;
    row.method = key.method;
    row.mean_abs_bias = 0.0;
    for (double b : biases) row.mean_abs_bias += b;
    row.mean_abs_bias /= static_cast<double>(biases.size());
    row.min_abs_bias = *std::min_element(biases.begin(), biases.end());
    row.max_abs_bias = *std::max_element(biases.begin(), biases.end());
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string write_setting_bias_csv(const std::vector<SettingBias>& rows) {
  std::string out =
      "scenario,family,sigma,method,mean_abs_bias,min_abs_bias,max_abs_bias\n";
  for (const auto& r : rows) {
    out += to_string(r.scenario);
    out += ',';
    out += to_string(r.family);
    out += ',';
    out += format_double(r.sigma);
    out += ',';
    out += r.method;
    out += ',';
    out += format_double(r.mean_abs_bias);
    out += ',';
    out += format_double(r.min_abs_bias);
    out += ',';
    out += format_double(r.max_abs_bias);
    out += '\n';
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out.flush()) throw std::runtime_error("short write to " + path);
}

}  // namespace doseopt::cli
