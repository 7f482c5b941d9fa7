#include "doseopt/bma.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "doseopt/errors.hpp"
#include "doseopt/glm_laplace.hpp"
#include "doseopt/linear_model.hpp"
#include "doseopt/rng.hpp"

namespace doseopt {

namespace {

// Per-model state reused across draws: the refit posterior and the centered
// grid design under the training scales.
struct GaussianSampler {
  GaussianFit fit;
  Eigen::MatrixXd grid_centered;
};

struct BernoulliSampler {
  LogisticFit fit;
  Eigen::MatrixXd grid_centered;
};

Eigen::MatrixXd centered_grid_rows(const DoseGrid& grid, ModelIndex gamma,
                                   const Eigen::VectorXd& scales,
                                   const Eigen::VectorXd& column_means) {
  Eigen::MatrixXd rows = design_rows(grid.values, gamma, scales);
  if (rows.cols() > 0) rows.rowwise() -= column_means.transpose();
  return rows;
}

}  // namespace

double quantile_type7(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile of empty sample");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size();
  const double h = (static_cast<double>(m) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, m - 1);
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

CurveDraws posterior_curve_draws(const PosteriorEnsemble& ensemble,
                                 const DoseResponseData& data, const DoseGrid& grid,
                                 int draws, std::uint64_t seed) {
  if (draws < 100) throw std::invalid_argument("draws must be >= 100");
  if (ensemble.entries.empty()) throw std::invalid_argument("empty ensemble");
  if (ensemble.family != data.family)
    throw std::invalid_argument("ensemble and data families differ");
  if (!(ensemble.g > 0.0)) throw std::invalid_argument("ensemble carries no shrinkage g");
  if (grid.values.empty()) throw std::invalid_argument("empty grid");
  data.validate();

  const int m = static_cast<int>(grid.values.size());
  const std::size_t n_models = ensemble.entries.size();
  std::vector<double> cumulative(n_models);
  double acc = 0.0;
  for (std::size_t i = 0; i < n_models; ++i) {
    acc += ensemble.entries[i].pmp;
    cumulative[i] = acc;
  }

  const std::span<const double> doses(data.doses.data(), data.doses.size());
  std::unordered_map<std::uint16_t, GaussianSampler> gauss_cache;
  std::unordered_map<std::uint16_t, BernoulliSampler> bern_cache;

  CurveDraws out;
  out.eta.resize(draws, m);
  out.model_of_draw.resize(draws);

  Rng rng(seed);
  Eigen::VectorXd z;
  for (int d = 0; d < draws; ++d) {
    const double u = rng.uniform() * acc;
    const std::size_t idx = std::min<std::size_t>(
        static_cast<std::size_t>(
            std::lower_bound(cumulative.begin(), cumulative.end(), u) -
            cumulative.begin()),
        n_models - 1);
    const ModelIndex gamma = ensemble.entries[idx].gamma;
    out.model_of_draw[d] = static_cast<std::uint32_t>(idx);

    if (data.family == Family::gaussian) {
      auto it = gauss_cache.find(gamma.bits());
      if (it == gauss_cache.end()) {
        const DesignMatrix design = build_design(doses, gamma);
        GaussianSampler s;
        s.fit = fit_gaussian(data.responses, design, ensemble.g);
        s.grid_centered =
            centered_grid_rows(grid, gamma, design.column_scales, s.fit.column_means);
        it = gauss_cache.emplace(gamma.bits(), std::move(s)).first;
      }
      const GaussianFit& fit = it->second.fit;
      const int p = fit.p_active;
      const double sigma2 = rng.inv_gamma(fit.sigma2_shape, fit.sigma2_rate);
      const double alpha =
          fit.intercept_mean + std::sqrt(sigma2 / fit.n) * rng.normal();
      if (p > 0) {
        z.resize(p);
        for (int j = 0; j < p; ++j) z[j] = rng.normal();
        const Eigen::VectorXd beta =
            fit.coef_shrunk_mean +
            std::sqrt(sigma2 * fit.g / (1.0 + fit.g)) *
                fit.coef_scale.triangularView<Eigen::Upper>().solve(z);
        out.eta.row(d) = (it->second.grid_centered * beta).array() + alpha;
      } else {
        out.eta.row(d).setConstant(alpha);
      }
    } else {
      auto it = bern_cache.find(gamma.bits());
      if (it == bern_cache.end()) {
        const DesignMatrix design = build_design(doses, gamma);
        BernoulliSampler s;
        s.fit = fit_logistic_map(data.responses, design, ensemble.g);
        if (!s.fit.converged)
          throw NonConvergenceError("ensemble contains a non-converged model");
        s.grid_centered =
            centered_grid_rows(grid, gamma, design.column_scales, s.fit.column_means);
        it = bern_cache.emplace(gamma.bits(), std::move(s)).first;
      }
      const LogisticFit& fit = it->second.fit;
      const int p = static_cast<int>(fit.coef_map.size()) - 1;
      z.resize(p + 1);
      for (int j = 0; j < p + 1; ++j) z[j] = rng.normal();
      const Eigen::VectorXd theta =
          fit.coef_map + fit.hessian_factor.transpose()
                             .triangularView<Eigen::Upper>()
                             .solve(z);
      if (p > 0)
        out.eta.row(d) = (it->second.grid_centered * theta.tail(p)).array() + theta[0];
      else
        out.eta.row(d).setConstant(theta[0]);
    }
  }
  return out;
}

CurveSummary curve_summary(const Eigen::MatrixXd& eta_draws, const DoseGrid& grid,
                           Family family) {
  const int m = static_cast<int>(grid.values.size());
  if (eta_draws.cols() != m)
    throw DimensionError("draw matrix columns do not match the grid");
  if (eta_draws.rows() < 1) throw std::invalid_argument("no draws to summarize");

  CurveSummary s;
  s.grid = grid;
  s.family = family;
  s.scale = CurveScale::linear_predictor;
  s.mean = eta_draws.colwise().mean();
  s.lower.resize(m);
  s.median.resize(m);
  s.upper.resize(m);
  std::vector<double> col(eta_draws.rows());
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd::Map(col.data(), col.size()) = eta_draws.col(j);
    std::sort(col.begin(), col.end());
    const auto q = [&](double p) {
      const double h = (static_cast<double>(col.size()) - 1.0) * p;
      const std::size_t lo = static_cast<std::size_t>(h);
      const std::size_t hi = std::min(lo + 1, col.size() - 1);
      return col[lo] + (h - lo) * (col[hi] - col[lo]);
    };
    s.lower[j] = q(0.025);
    s.median[j] = q(0.5);
    s.upper[j] = q(0.975);
  }
  return s;
}

CurveSummary to_response_scale(const CurveSummary& summary) {
  if (summary.family != Family::bernoulli)
    throw std::invalid_argument("response scale mapping applies to bernoulli only");
  if (summary.scale == CurveScale::response)
    throw std::invalid_argument("summary is already on the response scale");
  CurveSummary out = summary;
  out.scale = CurveScale::response;
  const auto map = [](Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = inv_logit(v[i]);
  };
  map(out.mean);
  map(out.lower);
  map(out.median);
  map(out.upper);
  return out;
}

Eigen::VectorXd hpm_curve(const PosteriorEnsemble& ensemble,
                          const DoseResponseData& data, const DoseGrid& grid) {
  if (ensemble.entries.empty()) throw std::invalid_argument("empty ensemble");
  if (!(ensemble.g > 0.0)) throw std::invalid_argument("ensemble carries no shrinkage g");
  data.validate();
  const ModelIndex gamma = hpm(ensemble);
  const std::span<const double> doses(data.doses.data(), data.doses.size());
  const DesignMatrix design = build_design(doses, gamma);

  if (data.family == Family::gaussian) {
    const GaussianFit fit = fit_gaussian(data.responses, design, ensemble.g);
    const Eigen::MatrixXd rows = design_rows(grid.values, gamma, design.column_scales);
    return predictive_eta_moments(fit, rows).mean;
  }
  const LogisticFit fit = fit_logistic_map(data.responses, design, ensemble.g);
  if (!fit.converged)
    throw NonConvergenceError("highest-probability model did not converge");
  const Eigen::MatrixXd rows =
      centered_grid_rows(grid, gamma, design.column_scales, fit.column_means);
  const int p = static_cast<int>(rows.cols());
  Eigen::VectorXd curve(grid.values.size());
  if (p > 0)
    curve = (rows * fit.coef_map.tail(p)).array() + fit.coef_map[0];
  else
    curve.setConstant(fit.coef_map[0]);
  return curve;
}

double optimum_from_curve(const Eigen::VectorXd& curve, const DoseGrid& grid) {
  if (curve.size() != static_cast<Eigen::Index>(grid.values.size()))
    throw DimensionError("curve length does not match the grid");
  if (curve.size() == 0) throw std::invalid_argument("empty curve");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < curve.size(); ++i)
    if (curve[i] > curve[best]) best = i;
  return grid.values[static_cast<std::size_t>(best)];
}

const char* to_string(Estimator e) {
  switch (e) {
    case Estimator::pmedian: return "pmedian";
    case Estimator::pmean: return "pmean";
    case Estimator::hpm_curve: return "hpm-curve";
  }
  return "pmedian";
}

Estimator estimator_from_string(std::string_view s) {
  if (s == "pmedian") return Estimator::pmedian;
  if (s == "pmean") return Estimator::pmean;
  if (s == "hpm-curve" || s == "hpm_curve") return Estimator::hpm_curve;
  throw std::invalid_argument("unknown estimator '" + std::string(s) +
                              "' (expected pmedian, pmean or hpm-curve)");
}

OptimumPosterior optimum_posterior(const Eigen::MatrixXd& eta_draws, const DoseGrid& grid,
                                   Estimator estimator,
                                   const Eigen::VectorXd* point_curve) {
  const int m = static_cast<int>(grid.values.size());
  if (eta_draws.cols() != m)
    throw DimensionError("draw matrix columns do not match the grid");
  if (eta_draws.rows() < 1) throw std::invalid_argument("no draws");

  OptimumPosterior out;
  out.estimator = estimator;
  out.samples.resize(eta_draws.rows());
  for (Eigen::Index d = 0; d < eta_draws.rows(); ++d) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < m; ++j)
      if (eta_draws(d, j) > eta_draws(d, best)) best = j;
    out.samples[static_cast<std::size_t>(d)] = grid.values[static_cast<std::size_t>(best)];
  }

  Eigen::VectorXd curve;
  switch (estimator) {
    case Estimator::pmean:
      curve = eta_draws.colwise().mean();
      break;
    case Estimator::pmedian: {
      curve.resize(m);
      std::vector<double> col(eta_draws.rows());
      for (int j = 0; j < m; ++j) {
        Eigen::VectorXd::Map(col.data(), col.size()) = eta_draws.col(j);
        curve[j] = quantile_type7(col, 0.5);
      }
      break;
    }
    case Estimator::hpm_curve:
      if (point_curve == nullptr)
        throw std::invalid_argument("hpm-curve estimator needs the model curve");
      curve = *point_curve;
      break;
  }
  out.point = optimum_from_curve(curve, grid);
  out.cri_low = quantile_type7(out.samples, 0.025);
  out.cri_high = quantile_type7(out.samples, 0.975);
  return out;
}

}  // namespace doseopt
