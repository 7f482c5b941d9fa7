#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "doseopt/data.hpp"
#include "doseopt/model_search.hpp"

namespace doseopt {

// Joint posterior draws of the latent mean curve on a grid. Row d of eta is
// one draw evaluated at every grid point; model_of_draw[d] indexes the
// ensemble entry the draw came from.
struct CurveDraws {
  Eigen::MatrixXd eta;  // draws x grid points
  std::vector<std::uint32_t> model_of_draw;
};

// Model selection by inverse-CDF over pmp, then a parameter draw from the
// selected model's posterior (exact conjugate for Gaussian, Laplace Gaussian
// for Bernoulli). draws >= 100. Deterministic for a fixed seed.
CurveDraws posterior_curve_draws(const PosteriorEnsemble& ensemble,
                                 const DoseResponseData& data, const DoseGrid& grid,
                                 int draws, std::uint64_t seed);

enum class CurveScale { linear_predictor, response };

// Pointwise mean and type-7 quantiles (0.025, 0.5, 0.975) of the draws.
struct CurveSummary {
  DoseGrid grid;
  Eigen::VectorXd mean;
  Eigen::VectorXd lower;   // 0.025
  Eigen::VectorXd median;  // 0.5
  Eigen::VectorXd upper;   // 0.975
  Family family = Family::gaussian;
  CurveScale scale = CurveScale::linear_predictor;
};

CurveSummary curve_summary(const Eigen::MatrixXd& eta_draws, const DoseGrid& grid,
                           Family family);

// Inverse logit applied elementwise to every stored curve. Bernoulli only.
CurveSummary to_response_scale(const CurveSummary& summary);

// Curve of the highest-probability model alone: analytic predictive mean for
// Gaussian, linear predictor at the posterior mode for Bernoulli.
Eigen::VectorXd hpm_curve(const PosteriorEnsemble& ensemble,
                          const DoseResponseData& data, const DoseGrid& grid);

// Grid value at the first index attaining the maximum.
double optimum_from_curve(const Eigen::VectorXd& curve, const DoseGrid& grid);

enum class Estimator { pmedian, pmean, hpm_curve };

const char* to_string(Estimator e);
Estimator estimator_from_string(std::string_view s);

// Posterior of the optimal dose: per-draw argmax samples, a point estimate
// from the chosen summary curve, and an equal-tailed 95% interval from the
// samples. point_curve is required for Estimator::hpm_curve and ignored
// otherwise.
struct OptimumPosterior {
  std::vector<double> samples;
  double point = 0.0;
  double cri_low = 0.0;
  double cri_high = 0.0;
  Estimator estimator = Estimator::pmedian;
};

OptimumPosterior optimum_posterior(const Eigen::MatrixXd& eta_draws, const DoseGrid& grid,
                                   Estimator estimator,
                                   const Eigen::VectorXd* point_curve = nullptr);

// Type-7 quantile of unsorted values, the convention used everywhere here.
double quantile_type7(std::vector<double> values, double p);

}  // namespace doseopt
