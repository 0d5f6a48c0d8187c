#include "alive/pmmh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "alive/errors.hpp"

namespace alive {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double normal_log_pdf(double x, double mean, double variance) {
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * variance) + d * d / variance);
}

double gamma_log_pdf(double x, double shape, double scale) {
  if (!(x > 0.0)) return kNegInf;
  return (shape - 1.0) * std::log(x) - x / scale - std::lgamma(shape) - shape * std::log(scale);
}

bool on_grid(double x, const std::vector<double>& points) {
  return std::find(points.begin(), points.end(), x) != points.end();
}

void check_dims(const Theta& theta, std::size_t expected, const char* what) {
  if (theta.size() != expected)
    throw std::invalid_argument(std::string(what) + ": theta has " + std::to_string(theta.size()) +
                                " coordinates, spec has " + std::to_string(expected));
}

}  // namespace

void PriorSpec::validate() const {
  if (components.empty()) throw std::invalid_argument("PriorSpec: no components");
  for (const auto& c : components) {
    std::visit(overloaded{
                   [](const NormalPrior& p) {
                     if (!(p.variance > 0.0)) throw std::invalid_argument("normal prior: variance must be > 0");
                   },
                   [](const InverseGammaPrior& p) {
                     if (!(p.shape > 0.0) || !(p.scale > 0.0))
                       throw std::invalid_argument("inverse gamma prior: shape and scale must be > 0");
                   },
                   [](const DiscreteUniformPrior& p) {
                     if (p.points.empty()) throw std::invalid_argument("discrete prior: no points");
                   },
               },
               c);
  }
}

double log_prior_density(const Theta& theta, const PriorSpec& priors) {
  check_dims(theta, priors.components.size(), "log_prior_density");
  double total = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double x = theta[i];
    total += std::visit(
        overloaded{
            [x](const NormalPrior& p) { return normal_log_pdf(x, p.mean, p.variance); },
            [x](const InverseGammaPrior& p) {
              if (!(x > 0.0)) return kNegInf;
              return p.shape * std::log(p.scale) - std::lgamma(p.shape) - (p.shape + 1.0) * std::log(x) -
                     p.scale / x;
            },
            [x](const DiscreteUniformPrior& p) {
              return on_grid(x, p.points) ? -std::log(static_cast<double>(p.points.size())) : kNegInf;
            },
        },
        priors.components[i]);
    if (total == kNegInf) return kNegInf;
  }
  return total;
}

Theta sample_prior(const PriorSpec& priors, Rng& rng) {
  Theta theta;
  theta.reserve(priors.components.size());
  for (const auto& c : priors.components) {
    theta.push_back(std::visit(
        overloaded{
            [&rng](const NormalPrior& p) { return rng.normal(p.mean, std::sqrt(p.variance)); },
            [&rng](const InverseGammaPrior& p) {
              return 1.0 / std::gamma_distribution<double>(p.shape, 1.0 / p.scale)(rng);
            },
            [&rng](const DiscreteUniformPrior& p) { return p.points[rng.index(p.points.size())]; },
        },
        c));
  }
  return theta;
}

void ProposalSpec::validate() const {
  if (components.empty()) throw std::invalid_argument("ProposalSpec: no components");
  for (const auto& c : components) {
    std::visit(overloaded{
                   [](const RandomWalkNormal& q) {
                     if (!(q.variance > 0.0)) throw std::invalid_argument("random walk: variance must be > 0");
                   },
                   [](const GammaCentered& q) {
                     if (!(q.variance > 0.0)) throw std::invalid_argument("gamma proposal: variance must be > 0");
                   },
                   [](const UniformGridJump& q) {
                     if (q.points.empty()) throw std::invalid_argument("grid proposal: no points");
                   },
               },
               c);
  }
}

Theta propose(const Theta& current, const ProposalSpec& proposals, Rng& rng) {
  check_dims(current, proposals.components.size(), "propose");
  Theta next(current.size());
  for (std::size_t i = 0; i < current.size(); ++i) {
    const double x = current[i];
    next[i] = std::visit(
        overloaded{
            [&](const RandomWalkNormal& q) { return rng.normal(x, std::sqrt(q.variance)); },
            [&](const GammaCentered& q) {
              if (!(x > 0.0)) throw std::domain_error("gamma proposal from a non-positive point");
              return std::gamma_distribution<double>(x * x / q.variance, q.variance / x)(rng);
            },
            [&](const UniformGridJump& q) { return q.points[rng.index(q.points.size())]; },
        },
        proposals.components[i]);
  }
  return next;
}

double log_proposal_density(const Theta& to, const Theta& from, const ProposalSpec& proposals) {
  check_dims(to, proposals.components.size(), "log_proposal_density");
  check_dims(from, proposals.components.size(), "log_proposal_density");
  double total = 0.0;
  for (std::size_t i = 0; i < to.size(); ++i) {
    const double x = from[i];
    const double y = to[i];
    total += std::visit(
        overloaded{
            [&](const RandomWalkNormal& q) { return normal_log_pdf(y, x, q.variance); },
            [&](const GammaCentered& q) {
              if (!(x > 0.0)) return kNegInf;
              return gamma_log_pdf(y, x * x / q.variance, q.variance / x);
            },
            [&](const UniformGridJump& q) {
              return on_grid(y, q.points) ? -std::log(static_cast<double>(q.points.size())) : kNegInf;
            },
        },
        proposals.components[i]);
  }
  return total;
}

LikelihoodEstimator alive_likelihood(ModelFamily family, std::size_t n_alive, std::uint64_t trial_cap) {
  FilterOptions opts;
  opts.n_alive = n_alive;
  opts.trial_cap = trial_cap;
  opts.lean = true;
  detail::check_config(n_alive, trial_cap);
  return [family = std::move(family), opts](const Theta& theta, std::uint64_t seed) {
    const auto model = family(theta);
    const auto run = run_filter(model, opts, seed);
    Rng leaf_rng(derive_seed(seed, 1));
    const std::size_t leaf = sample_leaf(run.final_step(), leaf_rng);
    return LikelihoodDraw{run.log_gamma_through_horizon(), ancestral_path(run, leaf), run.total_trials()};
  };
}

ChainState pmmh_init(const LikelihoodEstimator& estimator, const PriorSpec& priors, Rng& rng,
                     int max_attempts) {
  priors.validate();
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Theta theta = sample_prior(priors, rng);
    const std::uint64_t seed = rng();
    try {
      auto draw = estimator(theta, seed);
      ChainState state;
      state.theta = std::move(theta);
      state.log_gamma_hat = draw.log_gamma;
      state.trajectory = std::move(draw.trajectory);
      state.filter_seed = seed;
      return state;
    } catch (const CapExceeded&) {
    }
  }
  throw InitFailed("pmmh_init: filter hit the trial cap for " + std::to_string(max_attempts) +
                   " prior draws");
}

StepOutcome pmmh_step(ChainState& state, const ProposalSpec& proposals, const PriorSpec& priors,
                      const LikelihoodEstimator& estimator, Rng& rng) {
  StepOutcome out;
  ++state.iteration;
  Theta candidate = propose(state.theta, proposals, rng);
  const double log_prior_new = log_prior_density(candidate, priors);
  if (log_prior_new == kNegInf || !std::isfinite(log_prior_new)) {
    out.outside_prior = true;
    return out;
  }
  const std::uint64_t seed = rng();
  LikelihoodDraw draw;
  try {
    draw = estimator(candidate, seed);
  } catch (const CapExceeded&) {
    out.cap_exceeded = true;
    return out;
  }
  out.trials = draw.trials;

  const double log_ratio = (draw.log_gamma + log_prior_new + log_proposal_density(state.theta, candidate, proposals)) -
                           (state.log_gamma_hat + log_prior_density(state.theta, priors) +
                            log_proposal_density(candidate, state.theta, proposals));
  const double u = rng.uniform_open();
  if (std::log(u) < log_ratio) {
    state.theta = std::move(candidate);
    state.log_gamma_hat = draw.log_gamma;
    state.trajectory = std::move(draw.trajectory);
    state.filter_seed = seed;
    ++state.accepted;
    out.accepted = true;
  }
  return out;
}

ChainRecord run_chain(const ChainConfig& config, const LikelihoodEstimator& estimator) {
  if (config.iterations < 1) throw std::invalid_argument("run_chain: iterations must be >= 1");
  if (config.thinning < 1) throw std::invalid_argument("run_chain: thinning must be >= 1");
  config.priors.validate();
  config.proposals.validate();
  if (config.priors.components.size() != config.proposals.components.size())
    throw std::invalid_argument("run_chain: prior and proposal dimensions differ");

  Rng rng(config.seed);
  ChainRecord record;
  ChainState state = pmmh_init(estimator, config.priors, rng, config.init_attempts);
  record.trace.push_back(TraceRow{0, state.theta, state.log_gamma_hat, false, false, 0});

  for (std::uint64_t i = 1; i <= config.iterations; ++i) {
    const StepOutcome step = pmmh_step(state, config.proposals, config.priors, estimator, rng);
    record.total_trials += step.trials;
    if (step.accepted) ++record.accepted;
    if (step.cap_exceeded) ++record.cap_events;
    if (i > config.burn_in && (i - config.burn_in) % config.thinning == 0)
      record.trace.push_back(
          TraceRow{i, state.theta, state.log_gamma_hat, step.accepted, step.cap_exceeded, step.trials});
  }
  record.iterations = config.iterations;
  record.final_state = std::move(state);
  return record;
}

}  // namespace alive
