#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "alive/alive_filter.hpp"
#include "alive/models/abc_hmm.hpp"
#include "alive/rng.hpp"

// Particle marginal Metropolis-Hastings on a static parameter vector, with the
// alive filter supplying the likelihood estimate and a sampled trajectory.

namespace alive {

using Theta = std::vector<double>;

struct NormalPrior {
  double mean = 0.0;
  double variance = 1.0;
};

/// Density proportional to x^(-shape-1) exp(-scale/x) on x > 0; mode scale/(shape+1).
struct InverseGammaPrior {
  double shape = 2.0;
  double scale = 1.0;
};

/// Uniform on a finite set of points. A single point gives a degenerate prior.
struct DiscreteUniformPrior {
  std::vector<double> points;
};

using PriorComponent = std::variant<NormalPrior, InverseGammaPrior, DiscreteUniformPrior>;

struct PriorSpec {
  std::vector<PriorComponent> components;  // one per coordinate of theta
  void validate() const;
};

double log_prior_density(const Theta& theta, const PriorSpec& priors);
Theta sample_prior(const PriorSpec& priors, Rng& rng);

struct RandomWalkNormal {
  double variance = 1.0;
};

/// Gamma proposal with mean equal to the current point and the given variance:
/// shape = x^2 / v, scale = v / x. Needs a positive current point.
struct GammaCentered {
  double variance = 1.0;
};

/// Independent uniform draw from a fixed point set (symmetric).
struct UniformGridJump {
  std::vector<double> points;
};

using ProposalComponent = std::variant<RandomWalkNormal, GammaCentered, UniformGridJump>;

struct ProposalSpec {
  std::vector<ProposalComponent> components;
  void validate() const;
};

Theta propose(const Theta& current, const ProposalSpec& proposals, Rng& rng);
/// log q(to | from); -inf if `to` is unreachable from `from`.
double log_proposal_density(const Theta& to, const Theta& from, const ProposalSpec& proposals);

/// One likelihood evaluation: log of the estimate, a trajectory drawn with it,
/// and the number of simulations it cost.
struct LikelihoodDraw {
  double log_gamma = 0.0;
  Trajectory<AbcState> trajectory;
  std::uint64_t trials = 0;
};

/// Estimator called as (theta, seed). May throw CapExceeded.
using LikelihoodEstimator = std::function<LikelihoodDraw(const Theta&, std::uint64_t)>;
using ModelFamily = std::function<FeynmanKacModel<AbcState>(const Theta&)>;

/// Runs the alive filter to the horizon (lean mode), uses all n factors
/// prod_{p=1..n} (N-1)/(T_p-1), and traces back a uniformly chosen leaf.
LikelihoodEstimator alive_likelihood(ModelFamily family, std::size_t n_alive,
                                     std::uint64_t trial_cap = kDefaultTrialCap);

struct ChainState {
  Theta theta;
  double log_gamma_hat = -std::numeric_limits<double>::infinity();
  Trajectory<AbcState> trajectory;
  std::uint64_t filter_seed = 0;  // seed of the run that produced log_gamma_hat
  std::uint64_t iteration = 0;
  std::uint64_t accepted = 0;
};

struct StepOutcome {
  bool accepted = false;
  bool cap_exceeded = false;
  bool outside_prior = false;
  std::uint64_t trials = 0;  // simulations spent on the proposal
};

inline constexpr int kDefaultInitAttempts = 100;

/// Draws theta(0) from the prior until the filter completes; InitFailed after
/// `max_attempts` capped runs.
ChainState pmmh_init(const LikelihoodEstimator& estimator, const PriorSpec& priors, Rng& rng,
                     int max_attempts = kDefaultInitAttempts);

/// One MH transition. On rejection the stored estimate is kept as is.
StepOutcome pmmh_step(ChainState& state, const ProposalSpec& proposals, const PriorSpec& priors,
                      const LikelihoodEstimator& estimator, Rng& rng);

struct ChainConfig {
  PriorSpec priors;
  ProposalSpec proposals;
  std::uint64_t iterations = 1000;
  std::uint64_t seed = 1;
  std::uint64_t burn_in = 0;
  std::uint64_t thinning = 1;
  int init_attempts = kDefaultInitAttempts;
};

struct TraceRow {
  std::uint64_t iteration = 0;  // 0 is the initial state
  Theta theta;
  double log_gamma_hat = 0.0;
  bool accepted = false;
  bool cap_exceeded = false;
  std::uint64_t trials = 0;
};

struct ChainRecord {
  std::vector<TraceRow> trace;  // after burn-in and thinning; row 0 is the init state
  ChainState final_state;
  std::uint64_t iterations = 0;
  std::uint64_t accepted = 0;
  std::uint64_t cap_events = 0;
  std::uint64_t total_trials = 0;

  double acceptance_rate() const {
    return iterations ? static_cast<double>(accepted) / static_cast<double>(iterations) : 0.0;
  }
  double mean_trials_per_iteration() const {
    return iterations ? static_cast<double>(total_trials) / static_cast<double>(iterations) : 0.0;
  }
};

ChainRecord run_chain(const ChainConfig& config, const LikelihoodEstimator& estimator);

}  // namespace alive
