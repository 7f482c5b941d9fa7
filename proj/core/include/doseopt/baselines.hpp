#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "doseopt/data.hpp"

namespace doseopt {

// Zero-mean-after-centering GP regression with an RBF kernel. Hyperparameters
// come from a grid search on the log marginal likelihood. When
// signal_variance is unset it is profiled out in closed form and the noise
// grid is read as noise-to-signal ratios; when set, the noise grid is taken
// as absolute noise standard deviations.
struct GpConfig {
  std::vector<double> lengthscale_grid;
  std::vector<double> noise_grid;
  std::optional<double> signal_variance;
};

GpConfig default_gp_config(const DoseResponseData& data);

// Posterior mean curve on the grid. Throws std::invalid_argument on empty
// data or an empty grid in the config, NumericalError if the kernel
// eigendecomposition fails.
std::vector<double> gp_fit_predict(const DoseResponseData& data, const DoseGrid& grid,
                                   const GpConfig& config);

// Local linear smoother with tricube weights over the span-fraction nearest
// neighbours. Windows that are degenerate (all doses equal, or a singular
// local system) fall back to the weighted window mean.
struct LoessConfig {
  double span = 0.75;  // fraction of points per window
  int degree = 1;      // 0 or 1
};

std::vector<double> loess_fit_predict(const DoseResponseData& data, const DoseGrid& grid,
                                      const LoessConfig& config);

}  // namespace doseopt
