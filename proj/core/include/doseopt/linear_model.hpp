#pragma once

#include <Eigen/Dense>

#include "doseopt/fp_basis.hpp"

namespace doseopt {

// Conjugate Gaussian fit under a g-prior on the slopes of the centered,
// RMS-scaled basis, a flat prior on the intercept and p(sigma^2) ~ 1/sigma^2.
// Everything needed for prediction and posterior draws is closed form.
struct GaussianFit {
  double log_marginal = 0.0;  // log m(y | model), exact normalization
  double r_squared = 0.0;
  int p_active = 0;
  int n = 0;
  double g = 0.0;

  // Posterior of the slopes given sigma^2:
  //   beta | sigma^2, y ~ N(coef_shrunk_mean, sigma^2 * (g/(1+g)) * (Xc'Xc)^{-1})
  // coef_scale is the upper-triangular R with R'R = Xc'Xc.
  Eigen::VectorXd coef_shrunk_mean;
  Eigen::MatrixXd coef_scale;
  Eigen::VectorXd column_means;  // centering offsets of the scaled columns
  double intercept_mean = 0.0;   // = mean(y); alpha | sigma^2 ~ N(ybar, sigma^2/n)

  // sigma^2 | y ~ InvGamma(sigma2_shape, sigma2_rate), rate parameterization.
  double sigma2_shape = 0.0;
  double sigma2_rate = 0.0;
};

// max(n, 256); 256 = K^2 for the 16-transform basis.
double default_g(int n);

// Requires X.rank_ok, n >= p + 2, g > 0. Throws SingularModelError /
// DegenerateDataError / std::invalid_argument.
GaussianFit fit_gaussian(const Eigen::VectorXd& y, const DesignMatrix& X, double g);

// Predictive moments of the latent mean eta at new design rows (built with
// the training scales). Marginally eta_i is a location-scale t with dof
// degrees of freedom.
struct EtaMoments {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;  // strictly positive
  double dof = 0.0;       // n - 1
};

EtaMoments predictive_eta_moments(const GaussianFit& fit, const Eigen::MatrixXd& x_new);

}  // namespace doseopt
