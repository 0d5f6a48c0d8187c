#include "alive/oracles/grid_posterior.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "alive/errors.hpp"

namespace alive {

namespace {

double normal_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

std::vector<double> normalize_log_weights(std::span<const double> log_w) {
  const double top = *std::max_element(log_w.begin(), log_w.end());
  std::vector<double> w(log_w.size());
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(log_w[i] - top);
    total += w[i];
  }
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace

namespace {

// Forward recursion over the latent grid. Returns the log ABC likelihood and,
// if requested, the ABC filtered mean of z at every step.
double grid_forward(const LinearGaussianParams& params, std::span<const double> observations, double epsilon,
                    std::size_t latent_points, double half_width_sd, std::vector<double>* means) {
  params.validate();
  if (observations.empty()) throw std::invalid_argument("grid likelihood: no observations");
  if (latent_points < 2) throw std::invalid_argument("grid likelihood: need >= 2 latent points");
  if (!(epsilon > 0.0)) throw std::invalid_argument("grid likelihood: epsilon must be > 0");
  const std::size_t n = observations.size();
  const std::size_t g = latent_points;
  const double half_width = half_width_sd * std::sqrt(static_cast<double>(n) * params.sigma_v2);
  const double lo = params.z0 - half_width;
  const double cell = 2.0 * half_width / static_cast<double>(g);

  std::vector<double> z(g);
  for (std::size_t i = 0; i < g; ++i) z[i] = lo + (static_cast<double>(i) + 0.5) * cell;

  // cell * f(z_i | z_j), shared by every step
  std::vector<double> kernel(g * g);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) kernel[i * g + j] = cell * normal_pdf(z[i], z[j], params.sigma_v2);

  std::vector<double> alpha(g);
  std::vector<double> next(g);
  for (std::size_t i = 0; i < g; ++i)
    alpha[i] = cell * normal_pdf(z[i], params.z0, params.sigma_v2) *
               lg_abc_obs_density(params, observations[0], z[i], epsilon);

  double log_scale = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double total = std::accumulate(alpha.begin(), alpha.end(), 0.0);
    if (!(total > 0.0)) {
      if (means) means->assign(n, std::numeric_limits<double>::quiet_NaN());
      return -std::numeric_limits<double>::infinity();
    }
    log_scale += std::log(total);
    for (auto& a : alpha) a /= total;
    if (means) means->push_back(std::inner_product(alpha.begin(), alpha.end(), z.begin(), 0.0));
    if (k == n) break;
    for (std::size_t i = 0; i < g; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < g; ++j) s += kernel[i * g + j] * alpha[j];
      next[i] = s * lg_abc_obs_density(params, observations[k], z[i], epsilon);
    }
    alpha.swap(next);
  }
  return log_scale;
}

}  // namespace

double grid_abc_log_likelihood(const LinearGaussianParams& params, std::span<const double> observations,
                               double epsilon, std::size_t latent_points, double half_width_sd) {
  return grid_forward(params, observations, epsilon, latent_points, half_width_sd, nullptr);
}

std::vector<double> grid_abc_filtered_means(const LinearGaussianParams& params, std::span<const double> observations,
                                            double epsilon, std::size_t latent_points, double half_width_sd) {
  std::vector<double> means;
  grid_forward(params, observations, epsilon, latent_points, half_width_sd, &means);
  return means;
}

std::vector<double> grid_abc_posterior(std::span<const LinearGaussianParams> param_grid,
                                       std::span<const double> log_prior,
                                       std::span<const double> observations, double epsilon,
                                       const GridPosteriorOptions& options) {
  if (param_grid.empty()) throw std::invalid_argument("grid_abc_posterior: empty parameter grid");
  if (log_prior.size() != param_grid.size())
    throw std::invalid_argument("grid_abc_posterior: prior length differs from grid");
  if (observations.empty() || observations.size() > 4)
    throw std::invalid_argument("grid_abc_posterior: horizon must be in 1..4");
  if (!(epsilon > 0.0)) throw std::invalid_argument("grid_abc_posterior: epsilon must be > 0");

  auto posterior_at = [&](std::size_t points) {
    std::vector<double> log_w(param_grid.size());
    for (std::size_t i = 0; i < param_grid.size(); ++i)
      log_w[i] = log_prior[i] + grid_abc_log_likelihood(param_grid[i], observations, epsilon, points,
                                                        options.half_width_sd);
    return normalize_log_weights(log_w);
  };

  const auto coarse = posterior_at(options.latent_points);
  const auto fine = posterior_at(2 * options.latent_points);
  double tv = 0.0;
  for (std::size_t i = 0; i < coarse.size(); ++i) tv += std::abs(coarse[i] - fine[i]);
  tv *= 0.5;
  if (tv > options.refinement_tol)
    throw GridTooCoarse("grid posterior moved by " + std::to_string(tv) +
                        " in total variation under refinement");
  return fine;
}

}  // namespace alive
