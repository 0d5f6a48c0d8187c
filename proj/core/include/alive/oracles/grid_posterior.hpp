#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "alive/models/linear_gaussian.hpp"

namespace alive {

struct GridPosteriorOptions {
  std::size_t latent_points = 400;  // midpoint cells per latent coordinate
  double half_width_sd = 8.0;       // latent range: z0 +- half_width_sd * sqrt(n * sigma_v2)
  double refinement_tol = 1e-4;     // max total variation between G and 2G cells
};

/// log of the ABC likelihood  int prod_k g^eps(y_k | z_k) f(z_k | z_{k-1}) dz_{1:n},
/// by equal-weight midpoint quadrature on the tensor grid of latent cells. The
/// tensor sum is evaluated by summing out one coordinate at a time.
double grid_abc_log_likelihood(const LinearGaussianParams& params, std::span<const double> observations,
                               double epsilon, std::size_t latent_points, double half_width_sd = 8.0);

/// ABC filtered means E[Z_k | U_j in B_eps(y_j), j <= k] on the same grid.
std::vector<double> grid_abc_filtered_means(const LinearGaussianParams& params, std::span<const double> observations,
                                            double epsilon, std::size_t latent_points = 400,
                                            double half_width_sd = 8.0);

/// Normalized posterior weights over a finite parameter set, given log prior
/// weights (same length). Horizon must be <= 4. Throws GridTooCoarse if
/// doubling the latent resolution moves the weights by more than the tolerance
/// in total variation.
std::vector<double> grid_abc_posterior(std::span<const LinearGaussianParams> param_grid,
                                       std::span<const double> log_prior,
                                       std::span<const double> observations, double epsilon,
                                       const GridPosteriorOptions& options = {});

}  // namespace alive
