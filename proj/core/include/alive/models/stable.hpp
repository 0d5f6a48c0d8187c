#pragma once

#include "alive/rng.hpp"

namespace alive {

/// Stable law St(0, scale, skewness, stability) in the S1 parameterization
/// (Samorodnitsky-Taqqu): stability 2 is Gaussian with variance 2 scale^2,
/// stability 1 with skewness 0 is Cauchy with the given scale.
struct StableParams {
  double scale = 1.0;      // xi_1 > 0
  double skewness = 0.0;   // xi_2 in [-1, 1]
  double stability = 2.0;  // xi_3 in (0, 2]

  void validate() const;
};

/// One location-0 stable variate by the Chambers-Mallows-Stuck construction.
double sample_stable(const StableParams& params, Rng& rng);

}  // namespace alive
