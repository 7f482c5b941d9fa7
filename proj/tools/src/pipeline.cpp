#include "doseopt_cli/pipeline.hpp"

#include <charconv>
#include <stdexcept>

#include "doseopt/linear_model.hpp"

namespace doseopt::cli {

double resolve_g(const std::string& spec, const DoseResponseData& data) {
  if (spec == "auto") return default_g(data.n());
  if (spec == "eb") return empirical_bayes_g(data);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(spec.data(), spec.data() + spec.size(), value);
  if (ec != std::errc() || ptr != spec.data() + spec.size() || !(value > 0.0))
    throw std::invalid_argument("--g must be `auto`, `eb` or a positive number, got `" +
                                spec + "`");
  return value;
}

FitResult run_fit(const DoseResponseData& data, const FitOptions& options) {
  data.validate();
  if (data.family != options.family)
    throw std::invalid_argument("data family does not match the requested family");

  FitResult result;
  result.g_used = resolve_g(options.g, data);
  result.max_terms_used =
      options.max_terms < 0 ? default_max_terms(data) : options.max_terms;
  result.grid = DoseGrid::uniform(options.grid_min, options.grid_max,
                                  options.grid_points);

  if (options.search == SearchMode::enumerate_all) {
    result.ensemble = enumerate_models(data, result.g_used, result.max_terms_used);
  } else {
    MjmcmcOptions mj;
    mj.max_terms = result.max_terms_used;
    result.ensemble =
        mjmcmc(data, result.g_used, options.iterations, options.seed, mj);
  }

  const CurveDraws draws = posterior_curve_draws(result.ensemble, data, result.grid,
                                                 options.draws, options.seed);
  result.curve = curve_summary(draws.eta, result.grid, data.family);
  if (data.family == Family::bernoulli)
    result.response_curve = to_response_scale(result.curve);
  result.hpm_curve_values = hpm_curve(result.ensemble, data, result.grid);
  result.optimum = optimum_posterior(draws.eta, result.grid, options.estimator,
                                     &result.hpm_curve_values);
  return result;
}

}  // namespace doseopt::cli
