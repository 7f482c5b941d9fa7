#pragma once

#include <cstdint>
#include <vector>

#include "doseopt/data.hpp"
#include "doseopt/rng.hpp"

namespace doseopt {

// Benchmark ground-truth curve shapes: (a) saturating plateau, (b) single
// interior peak, (c) bimodal bumps on a rising trend, (d) slow saturation.
enum class Scenario { a, b, c, d };

const char* to_string(Scenario s);
Scenario scenario_from_string(std::string_view s);

// True latent mean at dose x (linear predictor scale for Bernoulli).
double eta_true(Scenario s, Family f, double x);

struct DesignLevel {
  double dose = 0.0;
  int replicates = 0;
};

// Seven log-spread dose levels; 8 replicates each for Gaussian, 60 for
// Bernoulli.
std::vector<DesignLevel> default_design(Family f);

// Noise grid the benchmark sweeps over.
const std::vector<double>& default_sigma_grid();

struct ScenarioSpec {
  Scenario scenario = Scenario::a;
  Family family = Family::gaussian;
  double sigma = 1.0;
  std::vector<DesignLevel> design;  // empty: default_design(family)
  std::uint64_t seed = 1;
};

// Gaussian: y = eta + sigma * z. Bernoulli: y ~ Bern(invlogit(eta + e)),
// e ~ N(0, (0.1 sigma)^2). Doses depend only on the design, never the seed.
DoseResponseData simulate(const ScenarioSpec& spec);

// Single response draws, exposed for distribution tests.
double gaussian_response(double eta, double sigma, Rng& rng);
double bernoulli_response(double eta, double sigma, Rng& rng);

// argmax of eta_true over the grid (first index on ties).
double true_optimum(Scenario s, Family f, const DoseGrid& grid);

// Stable per-cell seed for benchmark work items. sigma enters as
// round(sigma * 10) so that representable grid values hash identically
// across parsers.
std::uint64_t cell_seed(std::uint64_t master_seed, Scenario s, Family f,
                        double sigma, int replicate);

}  // namespace doseopt
