#include "doseopt/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "doseopt/bma.hpp"
#include "doseopt/errors.hpp"
#include "doseopt/rng.hpp"

namespace doseopt {

namespace {

struct CellKey {
  Scenario scenario;
  Family family;
  double sigma;
  int replicate;

  bool operator<(const CellKey& o) const {
    if (scenario != o.scenario) return scenario < o.scenario;
    if (family != o.family) return family < o.family;
    if (sigma != o.sigma) return sigma < o.sigma;
    return replicate < o.replicate;
  }
};

std::string cell_name(const CellKey& key) {
  std::ostringstream os;
  os << "scenario=" << to_string(key.scenario) << " family=" << to_string(key.family)
     << " sigma=" << key.sigma << " replicate=" << key.replicate;
  return os.str();
}

using CellMap = std::map<CellKey, std::map<std::string, double>>;

CellMap group_cells(const std::vector<BenchmarkRecord>& records,
                    std::set<std::string>& methods) {
  CellMap cells;
  for (const auto& r : records) {
    if (r.method.empty()) throw std::invalid_argument("record with empty method name");
    methods.insert(r.method);
    const CellKey key{r.scenario, r.family, r.sigma, r.replicate};
    auto [it, inserted] = cells[key].emplace(r.method, r.abs_bias);
    if (!inserted)
      throw std::invalid_argument("duplicate record for method " + r.method + " in cell " +
                                  cell_name(key));
  }
  for (const auto& [key, by_method] : cells)
    for (const auto& method : methods)
      if (!by_method.count(method))
        throw MissingCellError("method " + method + " has no record for cell " +
                               cell_name(key));
  return cells;
}

}  // namespace

BenchmarkRecord make_record(std::string method, Scenario s, Family f, double sigma,
                            int replicate, double estimated, double truth) {
  BenchmarkRecord r;
  r.method = std::move(method);
  r.scenario = s;
  r.family = f;
  r.sigma = sigma;
  r.replicate = replicate;
  r.estimated_optimum = estimated;
  r.true_optimum = truth;
  r.abs_bias = std::abs(estimated - truth);
  return r;
}

std::vector<RankSummary> rank_table(const std::vector<BenchmarkRecord>& records) {
  if (records.empty()) throw std::invalid_argument("no records to rank");
  std::set<std::string> methods;
  const CellMap cells = group_cells(records, methods);

  std::map<std::string, std::vector<double>> ranks_by_method;
  std::map<std::string, std::vector<double>> bias_by_method;

  for (const auto& [key, by_method] : cells) {
    // Sort the cell by bias; ties share the average of the covered ranks.
    std::vector<std::pair<double, const std::string*>> order;
    order.reserve(by_method.size());
    for (const auto& [method, bias] : by_method) order.emplace_back(bias, &method);
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t i = 0;
    while (i < order.size()) {
      std::size_t j = i;
      while (j + 1 < order.size() && order[j + 1].first == order[i].first) ++j;
      const double shared = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
      for (std::size_t t = i; t <= j; ++t) ranks_by_method[*order[t].second].push_back(shared);
      i = j + 1;
    }
    for (const auto& [method, bias] : by_method) bias_by_method[method].push_back(bias);
  }

  std::vector<RankSummary> table;
  for (const auto& [method, ranks] : ranks_by_method) {
    RankSummary row;
    row.method = method;
    row.cells = static_cast<std::int64_t>(ranks.size());
    row.rank_sum = 0.0;
    for (double r : ranks) row.rank_sum += r;
    row.rank_median = quantile_type7(ranks, 0.5);
    row.rank_iqr = quantile_type7(ranks, 0.75) - quantile_type7(ranks, 0.25);
    const std::vector<double>& bias = bias_by_method[method];
    double mean = 0.0;
    for (double b : bias) mean += b;
    mean /= static_cast<double>(bias.size());
    double ss = 0.0;
    for (double b : bias) ss += (b - mean) * (b - mean);
    row.mean_abs_bias = mean;
    row.sd_abs_bias = bias.size() > 1 ? std::sqrt(ss / (bias.size() - 1.0)) : 0.0;
    table.push_back(std::move(row));
  }
  std::sort(table.begin(), table.end(), [](const RankSummary& a, const RankSummary& b) {
    if (a.rank_sum != b.rank_sum) return a.rank_sum < b.rank_sum;
    return a.method < b.method;
  });
  return table;
}

std::vector<BootstrapComparison> paired_bootstrap(
    const std::vector<BenchmarkRecord>& records, const std::string& reference,
    int resamples, std::uint64_t seed) {
  if (resamples < 1000) throw std::invalid_argument("resamples must be >= 1000");
  std::set<std::string> methods;
  const CellMap cells = group_cells(records, methods);
  if (!methods.count(reference))
    throw std::invalid_argument("reference method '" + reference + "' has no records");

  // diffs[m][c] = abs_bias of m minus abs_bias of the reference on cell c.
  const std::size_t n_cells = cells.size();
  std::map<std::string, std::vector<double>> diffs;
  for (const auto& method : methods) diffs[method].reserve(n_cells);
  for (const auto& [key, by_method] : cells) {
    const double ref_bias = by_method.at(reference);
    for (const auto& method : methods)
      diffs[method].push_back(by_method.at(method) - ref_bias);
  }

  std::vector<BootstrapComparison> out;
  Rng rng(seed);
  std::vector<std::size_t> pick(n_cells);
  std::map<std::string, std::vector<double>> boot_means;
  for (const auto& method : methods) boot_means[method].reserve(resamples);

  for (int r = 0; r < resamples; ++r) {
    for (std::size_t c = 0; c < n_cells; ++c)
      pick[c] = static_cast<std::size_t>(rng.integer(n_cells));
    for (const auto& method : methods) {
      const std::vector<double>& d = diffs[method];
      double mean = 0.0;
      for (std::size_t c = 0; c < n_cells; ++c) mean += d[pick[c]];
      boot_means[method].push_back(mean / static_cast<double>(n_cells));
    }
  }

  for (const auto& method : methods) {
    BootstrapComparison cmp;
    cmp.method = method;
    const std::vector<double>& d = diffs[method];
    double mean = 0.0;
    for (double v : d) mean += v;
    cmp.mean_diff = mean / static_cast<double>(n_cells);
    cmp.ci_low = quantile_type7(boot_means[method], 0.025);
    cmp.ci_high = quantile_type7(boot_means[method], 0.975);
    if (method == reference) {
      cmp.mean_diff = 0.0;  // diffs are identically zero; pin the row exactly
      cmp.ci_low = 0.0;
      cmp.ci_high = 0.0;
    }
    out.push_back(std::move(cmp));
  }
  return out;
}

}  // namespace doseopt
