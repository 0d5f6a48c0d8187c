#pragma once

#include <span>
#include <vector>

#include "alive/models/linear_gaussian.hpp"

namespace alive {

/// Scalar Kalman filter output for the linear-Gaussian model. Index k holds time k + 1.
struct KalmanOutput {
  std::vector<double> predicted_mean;
  std::vector<double> predicted_var;
  std::vector<double> filtered_mean;
  std::vector<double> filtered_var;
  std::vector<double> log_likelihood_path;  // log p(y_1 .. y_k)
  double log_likelihood = 0.0;
};

/// Exact recursion from the fixed point z0 (zero initial variance).
/// sigma_v2 may be zero; sigma_w2 must be positive.
KalmanOutput kalman_filter(const LinearGaussianParams& params, std::span<const double> observations);

}  // namespace alive
