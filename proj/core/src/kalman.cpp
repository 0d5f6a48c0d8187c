#include "alive/oracles/kalman.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace alive {

KalmanOutput kalman_filter(const LinearGaussianParams& params, std::span<const double> observations) {
  if (params.sigma_v2 < 0.0 || !(params.sigma_w2 > 0.0))
    throw std::invalid_argument("kalman_filter: need sigma_v2 >= 0 and sigma_w2 > 0");
  const double h = params.obs_coef;
  KalmanOutput out;
  double mean = params.z0;
  double var = 0.0;
  double loglik = 0.0;
  for (double y : observations) {
    const double pred_mean = mean;
    const double pred_var = var + params.sigma_v2;
    const double s = h * h * pred_var + params.sigma_w2;
    const double resid = y - h * pred_mean;
    loglik += -0.5 * (std::log(2.0 * std::numbers::pi * s) + resid * resid / s);
    const double gain = h * pred_var / s;
    mean = pred_mean + gain * resid;
    var = pred_var * (1.0 - gain * h);

    out.predicted_mean.push_back(pred_mean);
    out.predicted_var.push_back(pred_var);
    out.filtered_mean.push_back(mean);
    out.filtered_var.push_back(var);
    out.log_likelihood_path.push_back(loglik);
  }
  out.log_likelihood = loglik;
  return out;
}

}  // namespace alive
