#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "alive/errors.hpp"
#include "alive/fk_model.hpp"
#include "alive/rng.hpp"

// Alive particle filter for Feynman-Kac models with indicator potentials.
//
// At each time p, proposals are drawn in index order until the N-th alive one
// appears; that draw index (1-based) is the stopping time T_p. The first
// T_p - 1 draws then hold exactly N - 1 alive particles, and only those enter
// the estimators and the ancestor draw of the next step. The final alive draw
// is stored but excluded. All indices in this API are 0-based: draw j here is
// x_p^{j+1}.

namespace alive {

enum class Variant {
  alive,  // ancestors uniform over the N - 1 alive among the first T_{p-1} - 1 draws
  lgo,    // ancestors uniform over all N alive draws, including the stopping one
};

inline const char* to_string(Variant v) { return v == Variant::alive ? "alive" : "lgo"; }

inline constexpr std::uint64_t kDefaultTrialCap = 10'000'000;

struct FilterOptions {
  std::size_t n_alive = 100;  // N: the step stops at the N-th alive draw
  std::uint64_t trial_cap = kDefaultTrialCap;
  Variant variant = Variant::alive;
  // Lean steps keep only the N alive particles; dead states are never stored.
  bool lean = false;
};

/// log((N - 1) / (T - 1)), the per-step factor of the normalizing-constant estimate.
inline double log_step_factor(std::size_t n_alive, std::size_t stopping_time) {
  return std::log(static_cast<double>(n_alive - 1)) - std::log(static_cast<double>(stopping_time - 1));
}

template <typename State>
struct AliveStep {
  int time = 0;
  std::size_t n_alive = 0;
  std::size_t stopping_time = 0;
  bool lean = false;
  // All T_p draws in index order, or only the N alive ones when lean.
  std::vector<Particle<State>> particles;
  // Draw index (in the previous step) of each stored particle's parent. Empty at time 1.
  std::vector<std::size_t> ancestors;
  // Draw indices of the N alive particles, ascending; the last is stopping_time - 1.
  std::vector<std::size_t> alive_indices;

  /// Alive draws among the first T_p - 1; these carry the estimates.
  std::span<const std::size_t> retained_alive() const {
    return std::span<const std::size_t>(alive_indices).first(n_alive - 1);
  }

  /// Ancestor support for the next step under the given variant.
  std::span<const std::size_t> resampling_support(Variant v) const {
    return v == Variant::alive ? retained_alive() : std::span<const std::size_t>(alive_indices);
  }

  bool is_stored(std::size_t draw) const {
    if (!lean) return draw < particles.size();
    return std::binary_search(alive_indices.begin(), alive_indices.end(), draw);
  }

  const Particle<State>& particle_at(std::size_t draw) const { return particles[position_of(draw)]; }
  const State& state_at(std::size_t draw) const { return particle_at(draw).state; }

  std::size_t ancestor_of(std::size_t draw) const {
    if (ancestors.empty()) throw std::logic_error("time-1 particles have no ancestor");
    return ancestors[position_of(draw)];
  }

 private:
  std::size_t position_of(std::size_t draw) const {
    if (draw >= stopping_time)
      throw IndexOutOfRange("draw index " + std::to_string(draw) + " outside step of size " +
                            std::to_string(stopping_time));
    if (!lean) return draw;
    auto it = std::lower_bound(alive_indices.begin(), alive_indices.end(), draw);
    if (it == alive_indices.end() || *it != draw)
      throw IndexOutOfRange("draw " + std::to_string(draw) + " is dead and was dropped (lean step)");
    return static_cast<std::size_t>(it - alive_indices.begin());
  }
};

/// Checks the stopping-rule structure of a completed step: N - 1 alive among
/// the first T_p - 1 draws, the last draw alive, T_p >= N.
template <typename State>
bool satisfies_stopping_rule(const AliveStep<State>& step) {
  const std::size_t n = step.n_alive;
  if (n < 2 || step.stopping_time < n) return false;
  if (step.alive_indices.size() != n || step.alive_indices.back() != step.stopping_time - 1)
    return false;
  if (!std::is_sorted(step.alive_indices.begin(), step.alive_indices.end())) return false;
  if (step.lean) {
    if (step.particles.size() != n) return false;
    return std::all_of(step.particles.begin(), step.particles.end(),
                       [](const auto& p) { return p.alive; });
  }
  if (step.particles.size() != step.stopping_time) return false;
  std::size_t count = 0;
  for (std::size_t j = 0; j + 1 < step.stopping_time; ++j) count += step.particles[j].alive ? 1 : 0;
  return count == n - 1 && step.particles.back().alive;
}

namespace detail {

inline void check_config(std::size_t n_alive, std::uint64_t trial_cap) {
  if (n_alive < 2) throw std::invalid_argument("n_alive must be >= 2");
  if (trial_cap < n_alive) throw std::invalid_argument("trial_cap must be >= n_alive");
}

// Draws in strict index order until the N-th success. `propose(rng)` returns
// (state, parent) for the next draw; parent is ignored at time 1.
template <typename State, typename Propose>
AliveStep<State> sample_until_alive(const FeynmanKacModel<State>& model, int time,
                                    const FilterOptions& opts, bool record_parents, Rng& rng,
                                    Propose&& propose) {
  AliveStep<State> step;
  step.time = time;
  step.n_alive = opts.n_alive;
  step.lean = opts.lean;
  step.alive_indices.reserve(opts.n_alive);
  if (opts.lean) {
    step.particles.reserve(opts.n_alive);
    if (record_parents) step.ancestors.reserve(opts.n_alive);
  }

  std::uint64_t draws = 0;
  while (step.alive_indices.size() < opts.n_alive) {
    if (draws == opts.trial_cap) throw CapExceeded(time, draws);
    auto [state, parent] = propose(rng);
    const bool alive = model.alive(time, state);
    if (alive) step.alive_indices.push_back(static_cast<std::size_t>(draws));
    if (!opts.lean || alive) {
      step.particles.push_back(Particle<State>{std::move(state), alive});
      if (record_parents) step.ancestors.push_back(parent);
    }
    ++draws;
  }
  step.stopping_time = static_cast<std::size_t>(draws);
  return step;
}

}  // namespace detail

/// Time-1 step: i.i.d. draws from M_1(x_0, .) until the N-th alive one.
template <typename State>
AliveStep<State> alive_init(const FeynmanKacModel<State>& model, const FilterOptions& opts, Rng& rng) {
  detail::check_config(opts.n_alive, opts.trial_cap);
  return detail::sample_until_alive(model, 1, opts, false, rng, [&](Rng& r) {
    return std::pair<State, std::size_t>(model.sample(1, model.initial_point, r), 0);
  });
}

namespace detail {

template <typename State>
AliveStep<State> propagate(const AliveStep<State>& prev, const FeynmanKacModel<State>& model,
                           int time, const FilterOptions& opts, Variant variant, Rng& rng) {
  check_config(opts.n_alive, opts.trial_cap);
  if (time != prev.time + 1) throw std::invalid_argument("alive_step: time must follow prev.time");
  if (time > model.horizon) throw std::invalid_argument("alive_step: time beyond horizon");
  const auto support = prev.resampling_support(variant);
  return sample_until_alive(model, time, opts, true, rng, [&](Rng& r) {
    const std::size_t parent = support[r.index(support.size())];
    return std::pair<State, std::size_t>(model.sample(time, prev.state_at(parent), r), parent);
  });
}

}  // namespace detail

/// Step p > 1 of the alive filter: each draw picks its parent uniformly among
/// the N - 1 alive particles in the first T_{p-1} - 1 draws of `prev`.
template <typename State>
AliveStep<State> alive_step(const AliveStep<State>& prev, const FeynmanKacModel<State>& model,
                            int time, const FilterOptions& opts, Rng& rng) {
  return detail::propagate(prev, model, time, opts, Variant::alive, rng);
}

/// Le Gland-Oudjane resampling: parents uniform over all N alive draws of `prev`.
template <typename State>
AliveStep<State> lgo_step(const AliveStep<State>& prev, const FeynmanKacModel<State>& model,
                          int time, const FilterOptions& opts, Rng& rng) {
  return detail::propagate(prev, model, time, opts, Variant::lgo, rng);
}

template <typename State>
struct FilterRun {
  std::vector<AliveStep<State>> steps;
  std::size_t n_alive = 0;
  Variant variant = Variant::alive;
  // Sum over p = 1 .. n-1 of log((N-1)/(T_p-1)) for the completed steps.
  double log_gamma = 0.0;
  std::uint64_t seed = 0;
  std::string generator{Rng::generator_name()};

  int horizon() const { return static_cast<int>(steps.size()); }
  const AliveStep<State>& final_step() const { return steps.back(); }

  /// Includes the factor of the final step too: the estimate of the
  /// probability that every potential up to and including time n is one.
  double log_gamma_through_horizon() const {
    return log_gamma + log_step_factor(n_alive, steps.back().stopping_time);
  }

  std::uint64_t total_trials() const {
    std::uint64_t total = 0;
    for (const auto& s : steps) total += s.stopping_time;
    return total;
  }
};

/// Recomputes the log normalizing-constant accumulator from stored stopping times.
template <typename State>
double recompute_log_gamma(const FilterRun<State>& run) {
  double acc = 0.0;
  for (std::size_t p = 0; p + 1 < run.steps.size(); ++p)
    acc += log_step_factor(run.n_alive, run.steps[p].stopping_time);
  return acc;
}

/// Thrown by run_filter when a step hits the trial cap. Carries every step
/// completed before the failure.
template <typename State>
class FilterAborted : public CapExceeded {
 public:
  FilterAborted(const CapExceeded& cause, FilterRun<State> partial)
      : CapExceeded(cause), partial_(std::move(partial)) {}
  const FilterRun<State>& partial_run() const noexcept { return partial_; }

 private:
  FilterRun<State> partial_;
};

/// Runs the filter from time 1 to the model horizon; deterministic given seed.
template <typename State>
FilterRun<State> run_filter(const FeynmanKacModel<State>& model, const FilterOptions& opts,
                            std::uint64_t seed) {
  if (model.horizon < 1) throw std::invalid_argument("run_filter: horizon must be >= 1");
  detail::check_config(opts.n_alive, opts.trial_cap);
  Rng rng(seed);
  FilterRun<State> run;
  run.n_alive = opts.n_alive;
  run.variant = opts.variant;
  run.seed = seed;
  run.steps.reserve(static_cast<std::size_t>(model.horizon));
  try {
    run.steps.push_back(alive_init(model, opts, rng));
    for (int p = 2; p <= model.horizon; ++p) {
      run.log_gamma += log_step_factor(opts.n_alive, run.steps.back().stopping_time);
      run.steps.push_back(detail::propagate(run.steps.back(), model, p, opts, opts.variant, rng));
    }
  } catch (const CapExceeded& e) {
    // log_gamma must only cover completed steps followed by another completed step
    run.log_gamma = recompute_log_gamma(run);
    throw FilterAborted<State>(e, std::move(run));
  }
  return run;
}

/// Predictor estimate: average of phi over the first T_p - 1 draws.
template <typename State>
double predictor_estimate(const AliveStep<State>& step, const TestFunction<State>& phi) {
  if (step.lean)
    throw std::logic_error("predictor_estimate needs dead particles, which lean steps drop");
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < step.stopping_time; ++j) sum += phi(step.particles[j].state);
  return sum / static_cast<double>(step.stopping_time - 1);
}

/// Filter estimate eta(G phi) / eta(G): average of phi over the N - 1 retained alive draws.
template <typename State>
double filter_estimate(const AliveStep<State>& step, const TestFunction<State>& phi) {
  double sum = 0.0;
  for (std::size_t j : step.retained_alive()) sum += phi(step.state_at(j));
  return sum / static_cast<double>(step.n_alive - 1);
}

/// gamma_n(phi) estimate as mantissa * exp(log_scale).
struct ScaledEstimate {
  double log_scale = 0.0;
  double mantissa = 1.0;
  double value() const { return mantissa * std::exp(log_scale); }
};

template <typename State>
ScaledEstimate gamma_estimate(const FilterRun<State>& run, const TestFunction<State>& phi) {
  return ScaledEstimate{run.log_gamma, predictor_estimate(run.final_step(), phi)};
}

/// gamma_n(1): needs no particle states, so it also works on lean runs.
template <typename State>
ScaledEstimate gamma_estimate(const FilterRun<State>& run) {
  return ScaledEstimate{run.log_gamma, 1.0};
}

/// Follows ancestors back from draw `leaf` of the final step. Deterministic.
template <typename State>
Trajectory<State> ancestral_path(const FilterRun<State>& run, std::size_t leaf) {
  if (run.steps.empty()) throw std::logic_error("ancestral_path on an empty run");
  const auto& last = run.final_step();
  if (leaf + 1 >= last.stopping_time)
    throw IndexOutOfRange("leaf " + std::to_string(leaf) + " must be below T_n - 1 = " +
                          std::to_string(last.stopping_time - 1));
  Trajectory<State> path;
  path.states.resize(run.steps.size());
  std::size_t draw = leaf;
  for (std::size_t p = run.steps.size(); p-- > 0;) {
    const auto& step = run.steps[p];
    path.states[p] = step.state_at(draw);
    if (p > 0) draw = step.ancestor_of(draw);
  }
  return path;
}

/// Picks a final-step leaf with probability proportional to G_n over the first
/// T_n - 1 draws, i.e. uniformly among the N - 1 retained alive ones.
template <typename State>
std::size_t sample_leaf(const AliveStep<State>& step, Rng& rng) {
  const auto support = step.retained_alive();
  return support[rng.index(support.size())];
}

}  // namespace alive
