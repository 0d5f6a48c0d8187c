#include "alive/models/stochastic_volatility.hpp"

#include <cmath>
#include <stdexcept>

namespace alive {

void StableSvParams::validate() const {
  if (!(c > 0.0)) throw std::invalid_argument("StableSvParams: c must be > 0");
  noise.validate();
}

SvData sv_simulate(const StableSvParams& params, int horizon, double z0, std::uint64_t seed) {
  params.validate();
  if (horizon < 1) throw std::invalid_argument("sv_simulate: horizon must be >= 1");
  Rng rng(seed);
  const double sd = std::sqrt(params.c);
  SvData out;
  double z = z0;
  for (int n = 0; n < horizon; ++n) {
    z = params.phi * z + sd * rng.normal();
    out.latent.push_back(z);
    out.observations.push_back(sample_stable(params.noise, rng) * params.beta * std::exp(z));
  }
  return out;
}

AbcHmm<StableSvParams> make_sv_hmm(std::vector<double> observations, double epsilon, double z0) {
  AbcHmm<StableSvParams> hmm;
  hmm.latent_sampler = [](const StableSvParams& th, double z, Rng& rng) {
    return th.phi * z + std::sqrt(th.c) * rng.normal();
  };
  hmm.obs_sampler = [](const StableSvParams& th, double z, Rng& rng) {
    return sample_stable(th.noise, rng) * th.beta * std::exp(z);
  };
  hmm.epsilon = epsilon;
  hmm.observations = std::move(observations);
  hmm.initial_latent = z0;
  return hmm;
}

}  // namespace alive
