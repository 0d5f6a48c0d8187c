#pragma once

#include <stdexcept>

#include "alive/fk_model.hpp"

namespace alive {

/// The i.i.d. scenario M_p(x, .) = nu for every x and p, with nu uniform on
/// [0, 1) and B = [0, success_prob). Then nu(B) = success_prob, eta_p = nu and
/// gamma_n(1) = success_prob^(n-1).
inline FeynmanKacModel<double> make_iid_uniform_model(double success_prob, int horizon) {
  if (!(success_prob > 0.0 && success_prob <= 1.0))
    throw std::invalid_argument("iid model: success probability must be in (0, 1]");
  if (horizon < 1) throw std::invalid_argument("iid model: horizon must be >= 1");
  FeynmanKacModel<double> model;
  model.initial_point = 0.0;
  model.horizon = horizon;
  model.kernel = [](int, const double&, Rng& rng) { return rng.uniform(); };
  model.potential = [success_prob](int, const double& x) { return x < success_prob; };
  return model;
}

/// phi(x) = x, bounded by 1 on the unit interval.
inline TestFunction<double> identity_fn() {
  return TestFunction<double>([](const double& x) { return x; }, 1.0);
}

}  // namespace alive
