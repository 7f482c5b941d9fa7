#pragma once

// Reference implementations used only by tests. Everything here is written
// independently of the library code paths it checks: quadrature and Monte
// Carlo integrators for evidence values, a one-dimensional Newton solver,
// and brute-force grid scans.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doseopt/rng.hpp"

namespace oracles {

// ---------------------------------------------------------------------------
// Adaptive Simpson quadrature.

inline double simpson_slice(const std::function<double(double)>& f, double a, double b,
                            double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double b, double fa, double fm, double fb,
                                   double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson_slice(f, a, m, fa, flm, fm);
  const double right = simpson_slice(f, m, b, fm, frm, fb);
  if (depth <= 0) return left + right;
  if (std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10, int depth = 40) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = simpson_slice(f, a, b, fa, fm, fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// ---------------------------------------------------------------------------
// Log evidence of the intercept-plus-noise Gaussian model by brute-force 2D
// quadrature over (alpha, t = log sigma^2) with priors alpha flat, sigma^2
// proportional to 1/sigma^2 (so the t-density is flat).

inline double gaussian_null_log_evidence_quadrature(const Eigen::VectorXd& y) {
  const int n = static_cast<int>(y.size());
  const double ybar = y.mean();
  const double s_total = (y.array() - ybar).square().sum();
  const double t_hat = std::log(std::max(s_total / n, 1e-12));
  // Shift by the log-integrand peak so exp() stays in range.
  const double shift = -0.5 * n * std::log(2.0 * M_PI) - 0.5 * n * t_hat -
                       s_total / (2.0 * std::exp(t_hat));

  const auto inner = [&](double t) {
    const double sigma2 = std::exp(t);
    const double sd_alpha = std::sqrt(sigma2 / n);
    const auto f_alpha = [&](double alpha) {
      const double rss = s_total + n * (alpha - ybar) * (alpha - ybar);
      const double log_f =
          -0.5 * n * std::log(2.0 * M_PI) - 0.5 * n * t - rss / (2.0 * sigma2) - shift;
      return std::exp(log_f);
    };
    return adaptive_simpson(f_alpha, ybar - 40.0 * sd_alpha, ybar + 40.0 * sd_alpha,
                            1e-12 * std::max(sd_alpha, 1e-12));
  };
  const double integral = adaptive_simpson(inner, t_hat - 22.0, t_hat + 22.0, 1e-11);
  return std::log(integral) + shift;
}

// ---------------------------------------------------------------------------
// Monte Carlo log Bayes factor of a slope model against the intercept-only
// model. Draws (beta0, sigma^2) from the null posterior and beta from the
// g-prior, then averages the likelihood ratio; the average is an unbiased
// estimate of the marginal likelihood ratio. xc must hold centered columns.

struct McBayesFactor {
  double log_bf = 0.0;
  double std_error = 0.0;  // from 32 batch means on the log scale
};

inline McBayesFactor mc_log_bayes_factor(const Eigen::VectorXd& y,
                                         const Eigen::MatrixXd& xc, double g,
                                         std::int64_t draws, std::uint64_t seed) {
  const int n = static_cast<int>(y.size());
  const int p = static_cast<int>(xc.cols());
  const double ybar = y.mean();
  const double s_total = (y.array() - ybar).square().sum();

  const Eigen::MatrixXd gram = xc.transpose() * xc;
  const Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw std::runtime_error("oracle: singular gram");
  const Eigen::MatrixXd lower = llt.matrixL();
  const Eigen::VectorXd u1 = xc.transpose() * y;  // = xc' (y - beta0) for any beta0

  doseopt::Rng rng(seed);
  // Online logsumexp with a running maximum, accumulated per batch.
  const int kBatches = 32;
  std::vector<double> batch_log_mean(kBatches);
  const std::int64_t per_batch = draws / kBatches;
  Eigen::VectorXd z(p), beta(p);

  for (int b = 0; b < kBatches; ++b) {
    double run_max = -std::numeric_limits<double>::infinity();
    double run_sum = 0.0;
    for (std::int64_t i = 0; i < per_batch; ++i) {
      const double sigma2 = (0.5 * s_total) / rng.gamma(0.5 * (n - 1));
      for (int j = 0; j < p; ++j) z[j] = rng.normal();
      // beta ~ N(0, g sigma^2 gram^{-1}): solve L' beta = z, scale after.
      beta = lower.transpose().triangularView<Eigen::Upper>().solve(z);
      beta *= std::sqrt(g * sigma2);
      const double log_r =
          (2.0 * u1.dot(beta) - beta.dot(gram * beta)) / (2.0 * sigma2);
      if (log_r > run_max) {
        run_sum = run_sum * std::exp(run_max - log_r) + 1.0;
        run_max = log_r;
      } else {
        run_sum += std::exp(log_r - run_max);
      }
    }
    batch_log_mean[b] = run_max + std::log(run_sum) - std::log(double(per_batch));
  }

  // LSE over batches = log mean of all draws; batch spread gives the SE.
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : batch_log_mean) mx = std::max(mx, v);
  double s = 0.0;
  for (double v : batch_log_mean) s += std::exp(v - mx);
  McBayesFactor out;
  out.log_bf = mx + std::log(s / kBatches);
  double mean = 0.0;
  for (double v : batch_log_mean) mean += v / kBatches;
  double ss = 0.0;
  for (double v : batch_log_mean) ss += (v - mean) * (v - mean);
  out.std_error = std::sqrt(ss / (kBatches - 1.0) / kBatches);
  return out;
}

// ---------------------------------------------------------------------------
// Importance-sampling log evidence for the Bernoulli logit model with a flat
// intercept prior and N(0, g (xc'xc)^{-1}) slopes. Proposal is the Gaussian
// N(mode, (neg_hess)^{-1}) described by its lower Cholesky factor.

struct IsEvidence {
  double log_evidence = 0.0;
  double std_error = 0.0;
  double ess = 0.0;
};

inline IsEvidence is_log_evidence_logit(const Eigen::VectorXd& y,
                                        const Eigen::MatrixXd& xc, double g,
                                        const Eigen::VectorXd& mode,
                                        const Eigen::MatrixXd& chol_lower,
                                        std::int64_t draws, std::uint64_t seed) {
  const int n = static_cast<int>(y.size());
  const int p = static_cast<int>(xc.cols());
  const int d = p + 1;

  Eigen::MatrixXd precision(p, p);
  double log_prior_norm = 0.0;
  if (p > 0) {
    precision = xc.transpose() * xc / g;
    const Eigen::LLT<Eigen::MatrixXd> llt(precision);
    double half_log_det = 0.0;
    for (int i = 0; i < p; ++i) half_log_det += std::log(llt.matrixL()(i, i));
    log_prior_norm = -0.5 * p * std::log(2.0 * M_PI) + half_log_det;
  }
  double half_log_det_q = 0.0;
  for (int i = 0; i < d; ++i) half_log_det_q += std::log(chol_lower(i, i));
  const double log_q_norm = -0.5 * d * std::log(2.0 * M_PI) + half_log_det_q;

  doseopt::Rng rng(seed);
  const int kBatches = 32;
  std::vector<double> batch_log_mean(kBatches);
  const std::int64_t per_batch = draws / kBatches;
  Eigen::VectorXd z(d), theta(d), eta(n);
  double first_batch_ess = 0.0;

  for (int b = 0; b < kBatches; ++b) {
    double run_max = -std::numeric_limits<double>::infinity();
    double run_sum = 0.0;
    double run_sum_sq = 0.0;
    for (std::int64_t i = 0; i < per_batch; ++i) {
      for (int j = 0; j < d; ++j) z[j] = rng.normal();
      theta = mode + chol_lower.transpose().triangularView<Eigen::Upper>().solve(z);
      eta.setConstant(theta[0]);
      if (p > 0) eta += xc * theta.tail(p);
      double ll = 0.0;
      for (int r = 0; r < n; ++r) {
        const double e = eta[r];
        ll += y[r] * e - (e > 0.0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e)));
      }
      double log_prior = log_prior_norm;
      if (p > 0) {
        const Eigen::VectorXd beta = theta.tail(p);
        log_prior -= 0.5 * beta.dot(precision * beta);
      }
      const double log_q = log_q_norm - 0.5 * z.squaredNorm();
      const double log_w = ll + log_prior - log_q;
      if (log_w > run_max) {
        const double c = std::exp(run_max - log_w);
        run_sum = run_sum * c + 1.0;
        run_sum_sq = run_sum_sq * c * c + 1.0;
        run_max = log_w;
      } else {
        const double c = std::exp(log_w - run_max);
        run_sum += c;
        run_sum_sq += c * c;
      }
    }
    batch_log_mean[b] = run_max + std::log(run_sum) - std::log(double(per_batch));
    if (b == 0 && run_sum_sq > 0.0) first_batch_ess = run_sum * run_sum / run_sum_sq;
  }

  double mx = -std::numeric_limits<double>::infinity();
  for (double v : batch_log_mean) mx = std::max(mx, v);
  double s = 0.0;
  for (double v : batch_log_mean) s += std::exp(v - mx);
  IsEvidence out;
  out.log_evidence = mx + std::log(s / kBatches);
  double mean = 0.0;
  for (double v : batch_log_mean) mean += v / kBatches;
  double ss = 0.0;
  for (double v : batch_log_mean) ss += (v - mean) * (v - mean);
  out.std_error = std::sqrt(ss / (kBatches - 1.0) / kBatches);
  out.ess = first_batch_ess * kBatches;
  return out;
}

// ---------------------------------------------------------------------------
// One-dimensional Newton solver for the intercept-only logit MAP.

inline double newton_logit_intercept(const Eigen::VectorXd& y, double start = 0.0,
                                     int iters = 200) {
  const int n = static_cast<int>(y.size());
  double alpha = start;
  for (int i = 0; i < iters; ++i) {
    const double mu = 1.0 / (1.0 + std::exp(-alpha));
    const double grad = y.sum() - n * mu;
    const double info = std::max(n * mu * (1.0 - mu), 1e-12);
    const double step = grad / info;
    alpha += step;
    if (std::abs(step) < 1e-14) break;
  }
  return alpha;
}

// ---------------------------------------------------------------------------
// Brute-force argmax of f over [lo, hi] with `points` samples.

inline double fine_grid_argmax(const std::function<double(double)>& f, double lo,
                               double hi, int points = 1000000) {
  double best_x = lo;
  double best_f = f(lo);
  for (int i = 1; i < points; ++i) {
    const double x = lo + (hi - lo) * (static_cast<double>(i) / (points - 1));
    const double v = f(x);
    if (v > best_f) {
      best_f = v;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace oracles
