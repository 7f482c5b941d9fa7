#include "doseopt/glm_laplace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace doseopt {

namespace {

// Penalized Bernoulli logit objective over theta = (alpha, beta). The slope
// prior contributes -1/2 beta' P beta with P = Xc'Xc / g; its normalizing
// constant is added separately in log_marginal_laplace.
struct PenalizedLogistic {
  const Eigen::VectorXd& y;
  const Eigen::MatrixXd& xc;
  const Eigen::MatrixXd& precision;  // p x p

  double value(const Eigen::VectorXd& theta) const {
    const int p = static_cast<int>(xc.cols());
    const Eigen::VectorXd beta = theta.tail(p);
    const Eigen::VectorXd eta = (xc * beta).array() + theta[0];
    double ll = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i)
      ll += y[i] * eta[i] - log1p_exp(eta[i]);
    if (p > 0) ll -= 0.5 * beta.dot(precision * beta);
    return ll;
  }

  void grad_neg_hess(const Eigen::VectorXd& theta, Eigen::VectorXd& grad,
                     Eigen::MatrixXd& neg_hess) const {
    const int p = static_cast<int>(xc.cols());
    const int n = static_cast<int>(y.size());
    const Eigen::VectorXd beta = theta.tail(p);
    Eigen::VectorXd mu(n), w(n);
    for (int i = 0; i < n; ++i) {
      const double eta = theta[0] + (p > 0 ? xc.row(i).dot(beta) : 0.0);
      mu[i] = inv_logit(eta);
      w[i] = std::max(mu[i] * (1.0 - mu[i]), 1e-12);
    }
    const Eigen::VectorXd resid = y - mu;
    grad.resize(p + 1);
    grad[0] = resid.sum();
    neg_hess.resize(p + 1, p + 1);
    neg_hess(0, 0) = w.sum();
    if (p > 0) {
      grad.tail(p) = xc.transpose() * resid - precision * beta;
      const Eigen::MatrixXd xw = xc.array().colwise() * w.array();
      neg_hess.block(0, 1, 1, p) = xw.colwise().sum();
      neg_hess.block(1, 0, p, 1) = neg_hess.block(0, 1, 1, p).transpose();
      neg_hess.block(1, 1, p, p) = xc.transpose() * xw + precision;
    }
  }
};

}  // namespace

LogisticFit fit_logistic_map(const Eigen::VectorXd& y, const DesignMatrix& X, double g) {
  const int n = static_cast<int>(y.size());
  const int p = static_cast<int>(X.columns.cols());
  if (!X.rank_ok) throw SingularModelError("design matrix is rank deficient");
  if (X.columns.rows() != n)
    throw DimensionError("design rows do not match response length");
  if (n < 1) throw std::invalid_argument("empty response");
  if (!(g > 0.0)) throw std::invalid_argument("g must be positive");
  for (int i = 0; i < n; ++i)
    if (y[i] != 0.0 && y[i] != 1.0)
      throw std::invalid_argument("bernoulli responses must be exactly 0 or 1");

  LogisticFit fit;
  fit.n = n;
  fit.g = g;
  fit.column_means = p > 0 ? Eigen::VectorXd(X.columns.colwise().mean())
                           : Eigen::VectorXd(0);
  const Eigen::MatrixXd xc =
      p > 0 ? Eigen::MatrixXd(X.columns.rowwise() - fit.column_means.transpose())
            : Eigen::MatrixXd(n, 0);
  const Eigen::MatrixXd precision = p > 0 ? Eigen::MatrixXd(xc.transpose() * xc / g)
                                          : Eigen::MatrixXd(0, 0);

  const double ybar = std::clamp(y.mean(), 1e-6, 1.0 - 1e-6);
  Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(p + 1);
  theta0[0] = std::log(ybar / (1.0 - ybar));

  // All-equal responses: the intercept MAP diverges under its flat prior, and
  // the vanishing curvature lets the gradient tolerance fire at a finite point
  // that is not a mode. Flag immediately instead of iterating.
  const double ysum = y.sum();
  if (ysum == 0.0 || ysum == static_cast<double>(n)) {
    fit.coef_map = theta0;
    fit.converged = false;
    fit.iterations = 0;
    fit.penalized_value = PenalizedLogistic{y, xc, precision}.value(theta0);
    fit.loglik_map = fit.penalized_value;
    fit.hessian_factor.resize(0, 0);
    return fit;
  }

  const PenalizedLogistic obj{y, xc, precision};
  const NewtonResult mode = newton_map(obj, theta0);

  fit.coef_map = mode.x;
  fit.converged = mode.converged;
  fit.iterations = mode.iterations;
  fit.penalized_value = mode.value;
  const Eigen::VectorXd beta = mode.x.tail(p);
  fit.loglik_map = mode.value + (p > 0 ? 0.5 * beta.dot(precision * beta) : 0.0);

  Eigen::VectorXd grad;
  Eigen::MatrixXd neg_hess;
  obj.grad_neg_hess(mode.x, grad, neg_hess);
  Eigen::LLT<Eigen::MatrixXd> llt(neg_hess);
  if (llt.info() == Eigen::Success) {
    fit.hessian_factor = llt.matrixL();
  } else {
    fit.hessian_factor.resize(0, 0);
    fit.converged = false;
  }
  return fit;
}

double log_marginal_laplace(const LogisticFit& fit, const DesignMatrix& X, double g) {
  if (!fit.converged)
    throw NonConvergenceError("posterior mode search did not converge");
  const int p = static_cast<int>(X.columns.cols());
  if (fit.coef_map.size() != p + 1)
    throw DimensionError("fit and design disagree on the model size");

  double log_prior = 0.0;  // flat intercept contributes zero
  if (p > 0) {
    const Eigen::MatrixXd xc = X.columns.rowwise() - fit.column_means.transpose();
    const Eigen::MatrixXd precision = xc.transpose() * xc / g;
    Eigen::LLT<Eigen::MatrixXd> llt(precision);
    if (llt.info() != Eigen::Success)
      throw NumericalError("slope prior precision is not positive definite");
    double half_log_det = 0.0;
    for (int i = 0; i < p; ++i) half_log_det += std::log(llt.matrixL()(i, i));
    const Eigen::VectorXd beta = fit.coef_map.tail(p);
    log_prior = -0.5 * p * std::log(2.0 * M_PI) + half_log_det -
                0.5 * beta.dot(precision * beta);
  }

  double half_log_det_h = 0.0;
  for (int i = 0; i < p + 1; ++i)
    half_log_det_h += std::log(fit.hessian_factor(i, i));
  return fit.loglik_map + log_prior + 0.5 * (p + 1) * std::log(2.0 * M_PI) -
         half_log_det_h;
}

}  // namespace doseopt
