#include "alive/models/linear_gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace alive {

void LinearGaussianParams::validate() const {
  if (!(sigma_v2 > 0.0) || !(sigma_w2 > 0.0))
    throw std::invalid_argument("LinearGaussianParams: variances must be > 0");
}

LgData lg_simulate(const LinearGaussianParams& params, int horizon, std::uint64_t seed) {
  if (horizon < 1) throw std::invalid_argument("lg_simulate: horizon must be >= 1");
  if (params.sigma_v2 < 0.0 || params.sigma_w2 < 0.0)
    throw std::invalid_argument("lg_simulate: variances must be >= 0");
  Rng rng(seed);
  const double sv = std::sqrt(params.sigma_v2);
  const double sw = std::sqrt(params.sigma_w2);
  LgData out;
  out.latent.reserve(static_cast<std::size_t>(horizon));
  out.observations.reserve(static_cast<std::size_t>(horizon));
  double z = params.z0;
  for (int n = 0; n < horizon; ++n) {
    z += sv * rng.normal();
    out.latent.push_back(z);
    out.observations.push_back(params.obs_coef * z + sw * rng.normal());
  }
  return out;
}

AbcHmm<LinearGaussianParams> make_lg_hmm(std::vector<double> observations, double epsilon,
                                         double z0) {
  AbcHmm<LinearGaussianParams> hmm;
  hmm.latent_sampler = [](const LinearGaussianParams& th, double z, Rng& rng) {
    return z + std::sqrt(th.sigma_v2) * rng.normal();
  };
  hmm.obs_sampler = [](const LinearGaussianParams& th, double z, Rng& rng) {
    return th.obs_coef * z + std::sqrt(th.sigma_w2) * rng.normal();
  };
  hmm.epsilon = epsilon;
  hmm.observations = std::move(observations);
  hmm.initial_latent = z0;
  return hmm;
}

FeynmanKacModel<AbcState> make_lg_model(const LinearGaussianParams& params,
                                        std::vector<double> observations, double epsilon) {
  params.validate();
  return compile_abc_hmm(make_lg_hmm(std::move(observations), epsilon, params.z0), params);
}

OutlierInjection inject_outliers(std::vector<double> observations, double prob,
                                 std::span<const double> levels, std::uint64_t seed) {
  if (!(prob > 0.0 && prob < 1.0)) throw std::invalid_argument("inject_outliers: prob must be in (0, 1)");
  if (levels.empty()) throw std::invalid_argument("inject_outliers: empty level set");
  Rng rng(seed);
  OutlierInjection out;
  for (std::size_t n = 0; n < observations.size(); ++n) {
    // one uniform per index decides, a second picks the level
    if (rng.uniform() < prob) {
      observations[n] = levels[rng.index(levels.size())];
      out.replaced.push_back(n);
    }
  }
  out.observations = std::move(observations);
  return out;
}

std::vector<double> default_outlier_levels() {
  std::vector<double> levels;
  for (int c = 80; c <= 150; c += 10) levels.push_back(c);
  return levels;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double lg_abc_obs_density(const LinearGaussianParams& params, double y, double z, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("lg_abc_obs_density: epsilon must be > 0");
  const double sw = std::sqrt(params.sigma_w2);
  const double a = (y - epsilon - params.obs_coef * z) / sw;
  const double b = (y + epsilon - params.obs_coef * z) / sw;
  double mass;
  if (a > 0.0) {
    // both in the upper tail: difference of survival functions keeps precision
    mass = 0.5 * (std::erfc(a / std::sqrt(2.0)) - std::erfc(b / std::sqrt(2.0)));
  } else {
    mass = normal_cdf(b) - normal_cdf(a);
  }
  return mass / (2.0 * epsilon);
}

}  // namespace alive
