#include "doseopt_cli/benchmark_runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "doseopt/baselines.hpp"
#include "doseopt/bma.hpp"
#include "doseopt/parallel.hpp"
#include "doseopt/rng.hpp"
#include "doseopt_cli/csv_io.hpp"
#include "doseopt_cli/pipeline.hpp"

namespace doseopt::cli {
namespace {

constexpr const char* kKnownMethods[] = {"bfp_pmedian", "bfp_pmean", "bfp_best",
                                         "gp", "loess"};

bool known_method(const std::string& m) {
  return std::find(std::begin(kKnownMethods), std::end(kKnownMethods), m) !=
         std::end(kKnownMethods);
}

struct Cell {
  Scenario scenario = Scenario::a;
  Family family = Family::gaussian;
  double sigma = 0.0;
  int replicate = 0;
};

std::vector<double> resolved_sigmas(const BenchmarkConfig& config) {
  return config.sigmas.empty() ? default_sigma_grid() : config.sigmas;
}

// Fixed factorial order; final output and resumption both follow it.
std::vector<Cell> expand_cells(const BenchmarkConfig& config) {
  std::vector<Cell> cells;
  for (Scenario s : config.scenarios)
    for (Family f : config.families)
      for (double sigma : resolved_sigmas(config))
        for (int r = 1; r <= config.replicates; ++r)
          cells.push_back({s, f, sigma, r});
  return cells;
}

// Everything that determines a cell's numbers except the method list (rows
// are verified per method on reuse): the cell seed already folds in the
// master seed and the cell coordinates; the fit settings join it here. A
// checkpoint from a different configuration gets a different name and is
// simply never consulted, so stale files cannot leak into a resumed run.
std::uint64_t cell_tag(const BenchmarkConfig& config, const Cell& cell) {
  std::uint64_t h = cell_seed(config.master_seed, cell.scenario, cell.family,
                              cell.sigma, cell.replicate);
  h = hash64_combine(h, config.search == SearchMode::mjmcmc ? 1 : 2);
  h = hash64_combine(h, static_cast<std::uint64_t>(config.iterations));
  h = hash64_combine(h, static_cast<std::uint64_t>(config.draws));
  h = hash64_combine(h, static_cast<std::uint64_t>(config.grid_points));
  return h;
}

// sigma keyed as round(sigma*10), same convention as the per-cell seeds.
std::string cell_file_name(const BenchmarkConfig& config, const Cell& cell) {
  char tag[20];
  std::snprintf(tag, sizeof(tag), "%016llx",
                static_cast<unsigned long long>(cell_tag(config, cell)));
  return std::string(to_string(cell.scenario)) + "_" + to_string(cell.family) +
         "_s" + std::to_string(std::llround(cell.sigma * 10.0)) + "_r" +
         std::to_string(cell.replicate) + "_" + tag + ".csv";
}

// A checkpoint is reusable when its rows carry the cell's identity and cover
// every requested method exactly once. Extra methods from an earlier, wider
// run are tolerated and filtered out.
bool reuse_checkpoint(const std::vector<BenchmarkRecord>& rows, const Cell& cell,
                      const std::vector<std::string>& methods,
                      std::vector<BenchmarkRecord>* out) {
  std::map<std::string, const BenchmarkRecord*> by_method;
  for (const BenchmarkRecord& row : rows) {
    if (row.scenario != cell.scenario || row.family != cell.family ||
        row.sigma != cell.sigma || row.replicate != cell.replicate)
      return false;
    if (!by_method.emplace(row.method, &row).second) return false;
  }
  out->clear();
  for (const std::string& method : methods) {
    const auto it = by_method.find(method);
    if (it == by_method.end()) return false;
    out->push_back(*it->second);
  }
  return true;
}

}  // namespace

void validate_config(const BenchmarkConfig& config) {
  if (config.scenarios.empty()) throw std::invalid_argument("no scenarios selected");
  if (config.families.empty()) throw std::invalid_argument("no families selected");
  if (config.methods.empty()) throw std::invalid_argument("no methods selected");
  for (std::size_t i = 0; i < config.methods.size(); ++i) {
    if (!known_method(config.methods[i]))
      throw std::invalid_argument("unknown method `" + config.methods[i] + "`");
    for (std::size_t j = i + 1; j < config.methods.size(); ++j)
      if (config.methods[i] == config.methods[j])
        throw std::invalid_argument("duplicate method `" + config.methods[i] + "`");
  }
  if (config.replicates < 1)
    throw std::invalid_argument("replicates must be at least 1");
  if (config.iterations < 1)
    throw std::invalid_argument("iterations must be at least 1");
  if (config.draws < 100) throw std::invalid_argument("draws must be at least 100");
  if (config.grid_points < 2)
    throw std::invalid_argument("grid must have at least 2 points");
  if (!config.sigma_free) {
    const std::vector<double>& grid = default_sigma_grid();
    for (double sigma : config.sigmas)
      if (std::find(grid.begin(), grid.end(), sigma) == grid.end())
        throw std::invalid_argument(
            "sigma " + format_double(sigma) +
            " is not in the declared noise grid (pass --sigma-free to override)");
  }
}

std::vector<BenchmarkRecord> run_cell(const BenchmarkConfig& config, Scenario scenario,
                                      Family family, double sigma, int replicate) {
  const std::uint64_t seed =
      cell_seed(config.master_seed, scenario, family, sigma, replicate);

  ScenarioSpec spec;
  spec.scenario = scenario;
  spec.family = family;
  spec.sigma = sigma;
  spec.seed = seed;
  const DoseResponseData data = simulate(spec);

  FitOptions options;
  options.family = family;
  options.search = config.search;
  options.iterations = config.iterations;
  options.seed = seed;
  options.grid_points = config.grid_points;
  options.draws = config.draws;

  const DoseGrid grid =
      DoseGrid::uniform(options.grid_min, options.grid_max, options.grid_points);
  const double truth = true_optimum(scenario, family, grid);

  const bool need_fit =
      std::any_of(config.methods.begin(), config.methods.end(),
                  [](const std::string& m) { return m.rfind("bfp_", 0) == 0; });
  FitResult fit;
  if (need_fit) fit = run_fit(data, options);

  const auto curve_optimum = [&](const std::vector<double>& curve) {
    const Eigen::Map<const Eigen::VectorXd> mapped(
        curve.data(), static_cast<Eigen::Index>(curve.size()));
    return optimum_from_curve(mapped, grid);
  };

  std::vector<BenchmarkRecord> rows;
  rows.reserve(config.methods.size());
  for (const std::string& method : config.methods) {
    double estimated = 0.0;
    if (method == "bfp_pmedian") {
      estimated = optimum_from_curve(fit.curve.median, fit.grid);
    } else if (method == "bfp_pmean") {
      estimated = optimum_from_curve(fit.curve.mean, fit.grid);
    } else if (method == "bfp_best") {
      estimated = optimum_from_curve(fit.hpm_curve_values, fit.grid);
    } else if (method == "gp") {
      estimated = curve_optimum(gp_fit_predict(data, grid, default_gp_config(data)));
    } else if (method == "loess") {
      estimated = curve_optimum(loess_fit_predict(data, grid, LoessConfig{}));
    } else {
      throw std::invalid_argument("unknown method `" + method + "`");
    }
    rows.push_back(make_record(method, scenario, family, sigma, replicate, estimated,
                               truth));
  }
  return rows;
}

std::vector<BenchmarkRecord> run_benchmark(const BenchmarkConfig& config,
                                           const std::string& work_dir,
                                           int threads) {
  validate_config(config);
  const std::filesystem::path dir(work_dir);
  std::filesystem::create_directories(dir);

  const std::vector<Cell> cells = expand_cells(config);
  std::vector<std::vector<BenchmarkRecord>> slots(cells.size());

  parallel_for(
      static_cast<int>(cells.size()),
      [&](int i) {
        const Cell& cell = cells[static_cast<std::size_t>(i)];
        auto& slot = slots[static_cast<std::size_t>(i)];
        const std::filesystem::path path = dir / cell_file_name(config, cell);

        if (std::filesystem::exists(path)) {
          try {
            if (reuse_checkpoint(read_benchmark_csv(read_file(path.string())), cell,
                                 config.methods, &slot))
              return;
          } catch (const ParseError&) {
            // Damaged checkpoint: fall through and recompute.
          }
          slot.clear();
        }

        slot = run_cell(config, cell.scenario, cell.family, cell.sigma,
                        cell.replicate);

        // Rename keeps readers from ever seeing a half-written checkpoint.
        const std::filesystem::path tmp = path.string() + ".tmp";
        write_file(tmp.string(), write_benchmark_csv(slot));
        std::filesystem::rename(tmp, path);
      },
      threads);

  std::vector<BenchmarkRecord> records;
  records.reserve(cells.size() * config.methods.size());
  for (const auto& slot : slots)
    records.insert(records.end(), slot.begin(), slot.end());
  return records;
}

}  // namespace doseopt::cli
