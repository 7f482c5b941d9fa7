#include "doseopt/dgp_sim.hpp"

#include <cmath>
#include <stdexcept>

#include "doseopt/glm_laplace.hpp"

namespace doseopt {

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::a: return "a";
    case Scenario::b: return "b";
    case Scenario::c: return "c";
    case Scenario::d: return "d";
  }
  return "a";
}

Scenario scenario_from_string(std::string_view s) {
  if (s == "a") return Scenario::a;
  if (s == "b") return Scenario::b;
  if (s == "c") return Scenario::c;
  if (s == "d") return Scenario::d;
  throw std::invalid_argument("unknown scenario '" + std::string(s) +
                              "' (expected a, b, c or d)");
}

double eta_true(Scenario s, Family f, double x) {
  const auto sq = [](double v) { return v * v; };
  if (f == Family::gaussian) {
    switch (s) {
      case Scenario::a:
        return 0.8 + 1.4 * (1.0 - std::exp(-0.25 * x)) - 0.0015 * sq(x - 35.0) / 50.0;
      case Scenario::b:
        return 1.0 + 1.2 * (x / 20.0) * std::exp(-0.05 * (x - 20.0)) - 0.001 * x;
      case Scenario::c:
        return 1.0 + 0.25 * std::sqrt(x) - 0.25 * std::exp(-sq(x - 10.0) / 30.0) +
               0.25 * std::exp(-sq(x - 25.0) / 80.0) - 0.03 * std::max(0.0, x - 40.0);
      case Scenario::d:
        return 0.7 + 1.3 * (1.0 - std::exp(-0.15 * x)) - 0.002 * sq(x - 40.0) / 100.0;
    }
  }
  switch (s) {
    case Scenario::a:
      return -2.0 + 3.0 * (1.0 - std::exp(-0.2 * x)) - 0.05 * sq(x / 50.0);
    case Scenario::b:
      return -1.5 + 4.0 * (x / 30.0) * std::exp(-0.05 * (x - 25.0)) - 0.03 * sq(x / 50.0);
    case Scenario::c:
      return -1.0 + 0.4 * std::sqrt(x) - 0.5 * std::exp(-sq(x - 10.0) / 25.0) +
             0.6 * std::exp(-sq(x - 25.0) / 80.0) - 0.03 * std::max(0.0, x - 40.0);
    case Scenario::d:
      return -1.0 + 2.5 * (1.0 - std::exp(-0.08 * x)) - 0.04 * sq(x / 50.0);
  }
  throw std::logic_error("unreachable");
}

std::vector<DesignLevel> default_design(Family f) {
  static const double levels[7] = {0.4, 1.0, 2.5, 5.0, 10.0, 20.0, 30.0};
  const int reps = f == Family::gaussian ? 8 : 60;
  std::vector<DesignLevel> design;
  design.reserve(7);
  for (double dose : levels) design.push_back({dose, reps});
  return design;
}

const std::vector<double>& default_sigma_grid() {
  static const std::vector<double> grid = {0.1, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0};
  return grid;
}

double gaussian_response(double eta, double sigma, Rng& rng) {
  return eta + sigma * rng.normal();
}

double bernoulli_response(double eta, double sigma, Rng& rng) {
  const double shifted = eta + 0.1 * sigma * rng.normal();
  return rng.uniform() < inv_logit(shifted) ? 1.0 : 0.0;
}

DoseResponseData simulate(const ScenarioSpec& spec) {
  if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma))
    throw std::invalid_argument("sigma must be finite and nonnegative");
  const std::vector<DesignLevel> design =
      spec.design.empty() ? default_design(spec.family) : spec.design;
  int total = 0;
  for (const auto& level : design) {
    if (!(level.dose > 0.0)) throw std::invalid_argument("design doses must be positive");
    if (level.replicates < 1)
      throw std::invalid_argument("design replicates must be >= 1");
    total += level.replicates;
  }

  DoseResponseData data;
  data.family = spec.family;
  data.doses.resize(total);
  data.responses.resize(total);
  Rng rng(spec.seed);
  int row = 0;
  for (const auto& level : design) {
    const double eta = eta_true(spec.scenario, spec.family, level.dose);
    for (int r = 0; r < level.replicates; ++r, ++row) {
      data.doses[row] = level.dose;
      data.responses[row] = spec.family == Family::gaussian
                                ? gaussian_response(eta, spec.sigma, rng)
                                : bernoulli_response(eta, spec.sigma, rng);
    }
  }
  return data;
}

double true_optimum(Scenario s, Family f, const DoseGrid& grid) {
  if (grid.values.empty()) throw std::invalid_argument("empty grid");
  std::size_t best = 0;
  double best_eta = eta_true(s, f, grid.values[0]);
  for (std::size_t i = 1; i < grid.values.size(); ++i) {
    const double e = eta_true(s, f, grid.values[i]);
    if (e > best_eta) {
      best_eta = e;
      best = i;
    }
  }
  return grid.values[best];
}

std::uint64_t cell_seed(std::uint64_t master_seed, Scenario s, Family f, double sigma,
                        int replicate) {
  std::uint64_t h = hash64_mix(master_seed);
  h = hash64_combine(h, static_cast<std::uint64_t>(s));
  h = hash64_combine(h, static_cast<std::uint64_t>(f));
  h = hash64_combine(h, static_cast<std::uint64_t>(std::llround(sigma * 10.0)));
  h = hash64_combine(h, static_cast<std::uint64_t>(replicate));
  return h;
}

}  // namespace doseopt
