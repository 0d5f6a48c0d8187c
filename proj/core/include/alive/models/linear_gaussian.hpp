#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "alive/fk_model.hpp"
#include "alive/models/abc_hmm.hpp"

namespace alive {

/// Z_n = Z_{n-1} + V_n, Y_n = obs_coef * Z_n + W_n with V ~ N(0, sigma_v2), W ~ N(0, sigma_w2).
struct LinearGaussianParams {
  double sigma_v2 = 1.0;
  double sigma_w2 = 1.0;
  double obs_coef = 2.0;
  double z0 = 0.0;

  void validate() const;
};

struct LgData {
  std::vector<double> latent;        // Z_1 .. Z_n
  std::vector<double> observations;  // Y_1 .. Y_n
};

/// Forward simulation. Zero variances are accepted here (noise switched off);
/// every other entry point requires them strictly positive.
LgData lg_simulate(const LinearGaussianParams& params, int horizon, std::uint64_t seed);

AbcHmm<LinearGaussianParams> make_lg_hmm(std::vector<double> observations, double epsilon,
                                         double z0 = 0.0);

/// ABC linear-Gaussian model at fixed parameters.
FeynmanKacModel<AbcState> make_lg_model(const LinearGaussianParams& params,
                                        std::vector<double> observations, double epsilon);

struct OutlierInjection {
  std::vector<double> observations;
  std::vector<std::size_t> replaced;  // 0-based indices that now hold a level
};

/// Independently per index, with probability `prob`, replaces the observation
/// by a level drawn uniformly from `levels`.
OutlierInjection inject_outliers(std::vector<double> observations, double prob,
                                 std::span<const double> levels, std::uint64_t seed);

/// {80, 90, ..., 150}
std::vector<double> default_outlier_levels();

double normal_cdf(double x);

/// ABC observation density g^eps(y | z): Gaussian mass of the eps-ball around y
/// divided by the ball length 2 eps.
double lg_abc_obs_density(const LinearGaussianParams& params, double y, double z, double epsilon);

}  // namespace alive
