#pragma once

#include <cstddef>
#include <cstdint>

namespace alive {

/// T = number of Bernoulli(p) trials up to and including the N-th success.
/// E[(N-1)/(T-1)] = p and E[(N-1)(N-2)/((T-1)(T-2))] = p^2.

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double target = 0.0;
  std::size_t replicates = 0;

  double z_score() const { return std_error > 0.0 ? (mean - target) / std_error : 0.0; }
};

McEstimate nb_identity_mc(double p, std::size_t n, std::size_t replicates, std::uint64_t seed);
McEstimate nb_pair_identity_mc(double p, std::size_t n, std::size_t replicates, std::uint64_t seed);

/// Exact expectations by summing the negative-binomial pmf until the remaining
/// tail mass is below `tail_mass`.
double nb_identity_exact(double p, std::size_t n, double tail_mass = 1e-12);
double nb_pair_identity_exact(double p, std::size_t n, double tail_mass = 1e-12);

}  // namespace alive
