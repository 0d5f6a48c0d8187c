#include "alive/models/stable.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace alive {

void StableParams::validate() const {
  if (!(scale > 0.0)) throw std::invalid_argument("stable: scale must be > 0");
  if (!(skewness >= -1.0 && skewness <= 1.0)) throw std::invalid_argument("stable: skewness must be in [-1, 1]");
  if (!(stability > 0.0 && stability <= 2.0)) throw std::invalid_argument("stable: stability must be in (0, 2]");
}

double sample_stable(const StableParams& params, Rng& rng) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  const double alpha = params.stability;
  const double beta = params.skewness;
  const double v = std::numbers::pi * (rng.uniform_open() - 0.5);
  const double w = rng.exponential();

  if (alpha == 1.0) {
    const double shifted = half_pi + beta * v;
    const double x =
        (shifted * std::tan(v) - beta * std::log(half_pi * w * std::cos(v) / shifted)) / half_pi;
    return params.scale * x + beta * params.scale * std::log(params.scale) / half_pi;
  }

  const double t = beta * std::tan(half_pi * alpha);
  const double b = std::atan(t) / alpha;
  const double s = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
  const double x = s * std::sin(alpha * (v + b)) / std::pow(std::cos(v), 1.0 / alpha) *
                   std::pow(std::cos(v - alpha * (v + b)) / w, (1.0 - alpha) / alpha);
  return params.scale * x;
}

}  // namespace alive
