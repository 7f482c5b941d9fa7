#include "doseopt/baselines.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "doseopt/errors.hpp"

namespace doseopt {

GpConfig default_gp_config(const DoseResponseData& data) {
  data.validate();
  const double lo = data.doses.minCoeff();
  const double hi = data.doses.maxCoeff();
  const double range = std::max(hi - lo, 1e-6);

  GpConfig cfg;
  const auto log_spaced = [](double a, double b, int count) {
    std::vector<double> out(count);
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < count; ++i)
      out[i] = std::exp(la + (lb - la) * (count > 1 ? double(i) / (count - 1) : 0.0));
    return out;
  };
  cfg.lengthscale_grid = log_spaced(0.1 * range, 2.0 * range, 12);
  cfg.noise_grid = log_spaced(0.05, 1.5, 8);  // noise-to-signal ratios
  return cfg;
}

namespace {

Eigen::MatrixXd rbf_kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                           double lengthscale) {
  Eigen::MatrixXd k(a.size(), b.size());
  const double inv2l2 = 1.0 / (2.0 * lengthscale * lengthscale);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      const double d = a[i] - b[j];
      k(i, j) = std::exp(-d * d * inv2l2);
    }
  return k;
}

}  // namespace

std::vector<double> gp_fit_predict(const DoseResponseData& data, const DoseGrid& grid,
                                   const GpConfig& config) {
  data.validate();
  if (grid.values.empty()) throw std::invalid_argument("empty grid");
  if (config.lengthscale_grid.empty() || config.noise_grid.empty())
    throw std::invalid_argument("empty hyperparameter grid");
  for (double l : config.lengthscale_grid)
    if (!(l > 0.0)) throw std::invalid_argument("lengthscales must be positive");
  for (double v : config.noise_grid)
    if (!(v > 0.0)) throw std::invalid_argument("noise grid values must be positive");

  const int n = data.n();
  const int m = static_cast<int>(grid.values.size());
  const double ybar = data.responses.mean();
  const Eigen::VectorXd resid = data.responses.array() - ybar;

  if (resid.squaredNorm() < 1e-28) return std::vector<double>(m, ybar);

  const Eigen::Map<const Eigen::VectorXd> grid_vec(grid.values.data(), m);

  double best_lml = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_alpha;       // weights for the cross-kernel
  double best_lengthscale = 0.0;
  double best_signal = 1.0;         // multiplies the cross-kernel when fixed

  for (double lengthscale : config.lengthscale_grid) {
    // One eigendecomposition per lengthscale; every noise value then costs
    // only a diagonal rescale.
    const Eigen::MatrixXd k0 = rbf_kernel(data.doses, data.doses, lengthscale);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k0);
    if (eig.info() != Eigen::Success)
      throw NumericalError("kernel eigendecomposition failed");
    Eigen::VectorXd lam = eig.eigenvalues();
    const double lam_max = lam.maxCoeff();
    if (lam_max < 0.0) throw NumericalError("kernel matrix is not positive semidefinite");
    for (Eigen::Index i = 0; i < lam.size(); ++i) lam[i] = std::max(lam[i], 0.0);
    const Eigen::VectorXd q = eig.eigenvectors().transpose() * resid;

    for (double noise : config.noise_grid) {
      double lml;
      Eigen::VectorXd alpha_coef;
      double signal;
      if (!config.signal_variance) {
        // Profiled signal variance; noise is the noise-to-signal ratio rho.
        const Eigen::VectorXd d = lam.array() + noise * noise;
        const double s2 = (q.array().square() / d.array()).mean();
        if (!(s2 > 0.0)) continue;
        lml = -0.5 * (n * std::log(2.0 * M_PI * s2) + d.array().log().sum() + n);
        alpha_coef = (q.array() / d.array()).matrix();
        signal = 1.0;  // mean prediction does not depend on the profiled scale
      } else {
        const double s2 = *config.signal_variance;
        if (!(s2 > 0.0)) throw std::invalid_argument("signal variance must be positive");
        const Eigen::VectorXd d = (s2 * lam.array() + noise * noise).matrix();
        lml = -0.5 * ((q.array().square() / d.array()).sum() + d.array().log().sum() +
                      n * std::log(2.0 * M_PI));
        alpha_coef = (q.array() / d.array()).matrix();
        signal = s2;
      }
      if (lml > best_lml) {
        best_lml = lml;
        best_alpha = eig.eigenvectors() * alpha_coef;
        best_lengthscale = lengthscale;
        best_signal = signal;
      }
    }
  }
  if (!(best_lengthscale > 0.0))
    throw NumericalError("no usable hyperparameter combination");

  const Eigen::MatrixXd k_cross = rbf_kernel(grid_vec, data.doses, best_lengthscale);
  const Eigen::VectorXd mean = best_signal * (k_cross * best_alpha);
  std::vector<double> out(m);
  for (int i = 0; i < m; ++i) out[i] = ybar + mean[i];
  return out;
}

std::vector<double> loess_fit_predict(const DoseResponseData& data, const DoseGrid& grid,
                                      const LoessConfig& config) {
  data.validate();
  if (grid.values.empty()) throw std::invalid_argument("empty grid");
  if (config.degree != 0 && config.degree != 1)
    throw std::invalid_argument("loess degree must be 0 or 1");
  if (!(config.span > 0.0 && config.span <= 1.0))
    throw std::invalid_argument("loess span must be in (0, 1]");
  const int n = data.n();
  const int q = static_cast<int>(std::ceil(config.span * n));
  if (q < config.degree + 2)
    throw std::invalid_argument("span window too small: span * n must be >= degree + 2");

  std::vector<int> order(n);
  std::vector<double> dist(n);
  std::vector<double> out(grid.values.size());

  for (std::size_t gi = 0; gi < grid.values.size(); ++gi) {
    const double x0 = grid.values[gi];
    std::iota(order.begin(), order.end(), 0);
    for (int i = 0; i < n; ++i) dist[i] = std::abs(data.doses[i] - x0);
    std::nth_element(order.begin(), order.begin() + (q - 1), order.end(),
                     [&](int a, int b) { return dist[a] < dist[b]; });
    double d_max = 0.0;
    for (int i = 0; i < q; ++i) d_max = std::max(d_max, dist[order[i]]);

    double sw = 0.0, swu = 0.0, swuu = 0.0, swy = 0.0, swuy = 0.0;
    double plain_sum = 0.0;
    for (int i = 0; i < q; ++i) {
      const int idx = order[i];
      const double u = data.doses[idx] - x0;
      const double y = data.responses[idx];
      plain_sum += y;
      double w = 1.0;
      if (d_max > 0.0) {
        const double t = dist[idx] / d_max;
        const double c = 1.0 - t * t * t;
        w = c > 0.0 ? c * c * c : 0.0;
      }
      sw += w;
      swu += w * u;
      swuu += w * u * u;
      swy += w * y;
      swuy += w * u * y;
    }

    if (!(sw > 0.0)) {
      out[gi] = plain_sum / q;  // every weight vanished; plain window mean
      continue;
    }
    if (config.degree == 0) {
      out[gi] = swy / sw;
      continue;
    }
    const double det = sw * swuu - swu * swu;
    const double scale = std::max(sw * swuu, swu * swu);
    if (!(std::abs(det) > 1e-12 * std::max(scale, 1e-300))) {
      out[gi] = swy / sw;  // collapsed window (e.g. all doses equal)
      continue;
    }
    out[gi] = (swuu * swy - swu * swuy) / det;  // local line evaluated at u = 0
  }
  return out;
}

}  // namespace doseopt
