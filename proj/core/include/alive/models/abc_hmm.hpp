#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "alive/fk_model.hpp"
#include "alive/rng.hpp"

namespace alive {

/// Feynman-Kac state of an ABC-approximated HMM: latent value and pseudo-observation.
struct AbcState {
  double z = 0.0;
  double u = 0.0;
};

/// Scalar hidden Markov model known only through samplers, plus an ABC
/// tolerance ball around each observation.
template <typename Theta>
struct AbcHmm {
  using LatentSampler = std::function<double(const Theta&, double z_prev, Rng&)>;
  using ObsSampler = std::function<double(const Theta&, double z, Rng&)>;
  using Metric = std::function<double(double u, double y)>;

  LatentSampler latent_sampler;
  ObsSampler obs_sampler;
  double epsilon = 1.0;
  std::vector<double> observations;
  double initial_latent = 0.0;
  Metric metric;  // empty: |u - y|

  void validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("AbcHmm: epsilon must be > 0");
    if (observations.empty()) throw std::invalid_argument("AbcHmm: need at least one observation");
    if (!latent_sampler || !obs_sampler) throw std::invalid_argument("AbcHmm: samplers not set");
  }

  double distance(double u, double y) const { return metric ? metric(u, y) : std::abs(u - y); }
};

/// Compiles the HMM at a fixed parameter into a Feynman-Kac model on (z, u):
/// M_p draws z' ~ f(.|z) then u' ~ g(.|z'); G_p(z, u) = 1 iff d(u, y_p) < epsilon
/// (open ball). Horizon is the number of observations.
template <typename Theta>
FeynmanKacModel<AbcState> compile_abc_hmm(const AbcHmm<Theta>& hmm, Theta theta) {
  hmm.validate();
  auto shared = std::make_shared<const std::pair<AbcHmm<Theta>, Theta>>(hmm, std::move(theta));
  FeynmanKacModel<AbcState> model;
  model.initial_point = AbcState{hmm.initial_latent, 0.0};
  model.horizon = static_cast<int>(hmm.observations.size());
  model.kernel = [shared](int, const AbcState& from, Rng& rng) {
    const auto& [h, th] = *shared;
    const double z = h.latent_sampler(th, from.z, rng);
    return AbcState{z, h.obs_sampler(th, z, rng)};
  };
  model.potential = [shared](int time, const AbcState& x) {
    const auto& h = shared->first;
    return h.distance(x.u, h.observations[static_cast<std::size_t>(time) - 1]) < h.epsilon;
  };
  return model;
}

/// Test functions reading the latent coordinate.
inline TestFunction<AbcState> latent_mean_fn() {
  return TestFunction<AbcState>([](const AbcState& x) { return x.z; });
}

}  // namespace alive
