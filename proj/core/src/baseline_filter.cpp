#include "alive/baseline_filter.hpp"

#include <algorithm>

namespace alive {

std::vector<std::size_t> multinomial_resample(std::span<const double> weights, std::size_t count,
                                              Rng& rng) {
  if (count < 1) throw std::invalid_argument("multinomial_resample: count must be >= 1");
  std::vector<double> cumulative(weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0 || !std::isfinite(weights[i]))
      throw std::invalid_argument("multinomial_resample: weights must be finite and non-negative");
    total += weights[i];
    cumulative[i] = total;
  }
  if (!(total > 0.0)) throw AllZeroWeights();
  std::size_t last_positive = weights.size() - 1;
  while (weights[last_positive] == 0.0) --last_positive;

  std::vector<std::size_t> out(count);
  for (auto& idx : out) {
    const double u = rng.uniform() * total;
    // u < total, so the first cumulative value above u exists and has positive weight
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    idx = std::min(static_cast<std::size_t>(it - cumulative.begin()), last_positive);
  }
  return out;
}

}  // namespace alive
