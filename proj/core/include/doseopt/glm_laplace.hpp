#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "doseopt/errors.hpp"
#include "doseopt/fp_basis.hpp"

namespace doseopt {

struct NewtonResult {
  Eigen::VectorXd x;
  bool converged = false;
  int iterations = 0;
  double value = 0.0;
  std::vector<double> value_trace;  // objective after each accepted step
};

// Damped Newton ascent on a concave objective. Obj must provide
//   double value(const VectorXd&)
//   void   grad_neg_hess(const VectorXd&, VectorXd& grad, MatrixXd& neg_hess)
// with neg_hess positive definite wherever visited. Step halving keeps the
// objective non-decreasing; convergence means gradient max-norm < grad_tol.
// Iterates leaving the [-coef_bound, coef_bound] box stop the ascent with
// converged = false.
template <class Obj>
NewtonResult newton_map(const Obj& obj, Eigen::VectorXd x0, int max_iter = 100,
                        double grad_tol = 1e-8, double coef_bound = 30.0) {
  NewtonResult res;
  res.x = std::move(x0);
  res.value = obj.value(res.x);
  res.value_trace.push_back(res.value);
  const int d = static_cast<int>(res.x.size());
  Eigen::VectorXd grad(d);
  Eigen::MatrixXd neg_hess(d, d);
  for (int it = 1; it <= max_iter; ++it) {
    res.iterations = it;
    obj.grad_neg_hess(res.x, grad, neg_hess);
    if (grad.lpNorm<Eigen::Infinity>() < grad_tol) {
      res.converged = true;
      res.iterations = it - 1;
      return res;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(neg_hess);
    if (llt.info() != Eigen::Success) return res;
    const Eigen::VectorXd dir = llt.solve(grad);
    double step = 1.0;
    bool moved = false;
    // Acceptance slack at the objective's own rounding resolution. Inside
    // the quadratic zone a full Newton step improves the value by less than
    // one ulp; demanding a resolvable increase there rejects every step and
    // stalls the gradient just above its tolerance.
    const double accept_tol = 32.0 * std::numeric_limits<double>::epsilon() *
                              (1.0 + std::abs(res.value));
    while (step > 1e-10) {
      const Eigen::VectorXd cand = res.x + step * dir;
      const double v = obj.value(cand);
      if (std::isfinite(v) && v >= res.value - accept_tol) {
        res.x = cand;
        res.value = v;
        res.value_trace.push_back(v);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) return res;
    if (res.x.lpNorm<Eigen::Infinity>() > coef_bound) return res;
  }
  obj.grad_neg_hess(res.x, grad, neg_hess);
  res.converged = grad.lpNorm<Eigen::Infinity>() < grad_tol;
  return res;
}

// Laplace evidence around a mode found by newton_map:
//   value(x_hat) + (d/2) log(2 pi) - 1/2 log det(neg_hess(x_hat)).
// The objective value must already include the log prior.
template <class Obj>
double laplace_log_evidence(const Obj& obj, const NewtonResult& mode) {
  const int d = static_cast<int>(mode.x.size());
  Eigen::VectorXd grad(d);
  Eigen::MatrixXd neg_hess(d, d);
  obj.grad_neg_hess(mode.x, grad, neg_hess);
  Eigen::LLT<Eigen::MatrixXd> llt(neg_hess);
  if (llt.info() != Eigen::Success)
    throw NumericalError("negative Hessian not positive definite at mode");
  double half_log_det = 0.0;
  for (int i = 0; i < d; ++i) half_log_det += std::log(llt.matrixL()(i, i));
  return mode.value + 0.5 * d * std::log(2.0 * M_PI) - half_log_det;
}

// Posterior mode of a Bernoulli logit model: flat prior on the intercept,
// N(0, g (Xc'Xc)^{-1}) on the slopes of the centered scaled basis.
struct LogisticFit {
  Eigen::VectorXd coef_map;        // intercept first, then slopes
  Eigen::MatrixXd hessian_factor;  // lower Cholesky factor of -H at the mode
  Eigen::VectorXd column_means;
  double loglik_map = 0.0;         // Bernoulli log-likelihood at the mode
  double penalized_value = 0.0;    // loglik + log prior at the mode
  bool converged = false;
  int iterations = 0;
  int n = 0;
  double g = 0.0;
};

// y entries must be exactly 0 or 1. Starts at beta = 0 with the intercept at
// the logit of the clamped response mean. Throws SingularModelError on
// !X.rank_ok, std::invalid_argument on bad y or g.
LogisticFit fit_logistic_map(const Eigen::VectorXd& y, const DesignMatrix& X, double g);

// Laplace log evidence for the fit. Throws NonConvergenceError when the fit
// did not converge; such models are skipped upstream, never silently kept.
double log_marginal_laplace(const LogisticFit& fit, const DesignMatrix& X, double g);

// log(1 + exp(x)) without overflow.
inline double log1p_exp(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double inv_logit(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

}  // namespace doseopt
