#include "doseopt/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doseopt/errors.hpp"

namespace doseopt {

double default_g(int n) {
  if (n < 3) throw std::invalid_argument("default_g needs n >= 3");
  return std::max(static_cast<double>(n), 256.0);
}

GaussianFit fit_gaussian(const Eigen::VectorXd& y, const DesignMatrix& X, double g) {
  const int n = static_cast<int>(y.size());
  const int p = static_cast<int>(X.columns.cols());
  if (!X.rank_ok) throw SingularModelError("design matrix is rank deficient");
  if (X.columns.rows() != n)
    throw DimensionError("design rows do not match response length");
  if (n < p + 2) throw std::invalid_argument("fit_gaussian needs n >= p + 2");
  if (!(g > 0.0)) throw std::invalid_argument("g must be positive");

  GaussianFit fit;
  fit.n = n;
  fit.g = g;
  fit.p_active = p;
  fit.intercept_mean = y.mean();

  const Eigen::VectorXd yc = y.array() - fit.intercept_mean;
  const double s_total = yc.squaredNorm();
  if (p > 0 && !(s_total > 0.0))
    throw DegenerateDataError("constant response cannot identify slope columns");

  double r2 = 0.0;
  if (p > 0) {
    fit.column_means = X.columns.colwise().mean();
    const Eigen::MatrixXd xc = X.columns.rowwise() - fit.column_means.transpose();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(xc);
    const Eigen::VectorXd beta_ls = qr.solve(yc);
    const double rss = (yc - xc * beta_ls).squaredNorm();
    r2 = std::clamp(1.0 - rss / s_total, 0.0, 1.0);
    fit.coef_shrunk_mean = (g / (1.0 + g)) * beta_ls;
    fit.coef_scale = qr.matrixQR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  } else {
    fit.column_means.resize(0);
    fit.coef_shrunk_mean.resize(0);
    fit.coef_scale.resize(0, 0);
  }
  fit.r_squared = r2;

  // Exact marginal with the intercept and sigma^2 integrated out; the
  // (n-1-p)/2 exponent on (1+g) is what the centered convention buys.
  const double s_safe = std::max(s_total, 1e-300);
  const double half = 0.5 * (n - 1);
  fit.log_marginal = std::lgamma(half) - half * std::log(M_PI * s_safe) -
                     0.5 * std::log(static_cast<double>(n)) +
                     0.5 * (n - 1 - p) * std::log1p(g) -
                     half * std::log1p(g * (1.0 - r2));

  fit.sigma2_shape = half;
  fit.sigma2_rate = 0.5 * s_safe * (1.0 + g * (1.0 - r2)) / (1.0 + g);
  return fit;
}

EtaMoments predictive_eta_moments(const GaussianFit& fit, const Eigen::MatrixXd& x_new) {
  const int p = fit.p_active;
  if (x_new.cols() != p)
    throw DimensionError("prediction rows do not match the fitted model size");
  const int m = static_cast<int>(x_new.rows());
  const double shrink = fit.g / (1.0 + fit.g);
  const double s2_point = fit.sigma2_rate / fit.sigma2_shape;

  EtaMoments out;
  out.dof = 2.0 * fit.sigma2_shape;  // n - 1
  out.mean.resize(m);
  out.scale.resize(m);
  if (p == 0) {
    out.mean.setConstant(fit.intercept_mean);
    out.scale.setConstant(std::sqrt(s2_point / fit.n));
    return out;
  }
  const Eigen::MatrixXd xc = x_new.rowwise() - fit.column_means.transpose();
  // q_i = x_i' (Xc'Xc)^{-1} x_i via one triangular solve against R'.
  const Eigen::MatrixXd w = fit.coef_scale.transpose()
                                .triangularView<Eigen::Lower>()
                                .solve(xc.transpose());
  out.mean = fit.intercept_mean + (xc * fit.coef_shrunk_mean).array();
  for (int i = 0; i < m; ++i) {
    const double q = w.col(i).squaredNorm();
    out.scale[i] = std::sqrt(s2_point * (1.0 / fit.n + shrink * q));
  }
  return out;
}

}  // namespace doseopt
