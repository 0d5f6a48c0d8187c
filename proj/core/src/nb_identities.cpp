#include "alive/oracles/nb_identities.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "alive/rng.hpp"

namespace alive {

namespace {

void check(double p, std::size_t n, std::size_t min_n) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("success probability must be in (0, 1)");
  if (n < min_n) throw std::invalid_argument("N too small for this identity");
}

template <typename Statistic>
McEstimate simulate(double p, std::size_t n, std::size_t replicates, std::uint64_t seed,
                    double target, Statistic&& stat) {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  Rng rng(seed);
  // failures before the N-th success; T = N + failures
  std::negative_binomial_distribution<long long> failures(static_cast<long long>(n), p);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t r = 0; r < replicates; ++r) {
    const double t = static_cast<double>(n) + static_cast<double>(failures(rng));
    const double x = stat(t);
    const double delta = x - mean;
    mean += delta / static_cast<double>(r + 1);
    m2 += delta * (x - mean);
  }
  McEstimate est;
  est.mean = mean;
  est.target = target;
  est.replicates = replicates;
  est.std_error = replicates > 1 ? std::sqrt(m2 / static_cast<double>(replicates - 1) /
                                             static_cast<double>(replicates))
                                 : 0.0;
  return est;
}

template <typename Statistic>
double pmf_sum(double p, std::size_t n, double tail_mass, Statistic&& stat) {
  const double nd = static_cast<double>(n);
  // log pmf(t) = lgamma(t) - lgamma(N) - lgamma(t - N + 1) + N log p + (t - N) log(1 - p)
  double mass = 0.0;
  double sum = 0.0;
  const double log_q = std::log1p(-p);
  for (double t = nd;; t += 1.0) {
    const double log_pmf = std::lgamma(t) - std::lgamma(nd) - std::lgamma(t - nd + 1.0) +
                           nd * std::log(p) + (t - nd) * log_q;
    const double pmf = std::exp(log_pmf);
    mass += pmf;
    sum += pmf * stat(t);
    // past the mode the tail is dominated geometrically, so remaining mass ~ 1 - mass
    if (1.0 - mass < tail_mass && t > nd / p) break;
    if (t > 1e9) throw std::runtime_error("pmf summation did not converge");
  }
  return sum;
}

}  // namespace

McEstimate nb_identity_mc(double p, std::size_t n, std::size_t replicates, std::uint64_t seed) {
  check(p, n, 2);
  const double k = static_cast<double>(n) - 1.0;
  return simulate(p, n, replicates, seed, p, [k](double t) { return k / (t - 1.0); });
}

McEstimate nb_pair_identity_mc(double p, std::size_t n, std::size_t replicates, std::uint64_t seed) {
  check(p, n, 3);
  const double k = (static_cast<double>(n) - 1.0) * (static_cast<double>(n) - 2.0);
  return simulate(p, n, replicates, seed, p * p,
                  [k](double t) { return k / ((t - 1.0) * (t - 2.0)); });
}

double nb_identity_exact(double p, std::size_t n, double tail_mass) {
  check(p, n, 2);
  const double k = static_cast<double>(n) - 1.0;
  return pmf_sum(p, n, tail_mass, [k](double t) { return k / (t - 1.0); });
}

double nb_pair_identity_exact(double p, std::size_t n, double tail_mass) {
  check(p, n, 3);
  const double k = (static_cast<double>(n) - 1.0) * (static_cast<double>(n) - 2.0);
  return pmf_sum(p, n, tail_mass, [k](double t) { return k / ((t - 1.0) * (t - 2.0)); });
}

}  // namespace alive
