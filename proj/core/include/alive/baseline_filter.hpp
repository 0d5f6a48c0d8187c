#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "alive/errors.hpp"
#include "alive/fk_model.hpp"
#include "alive/rng.hpp"

namespace alive {

/// Draws `count` indices i.i.d. proportional to `weights`.
/// Throws AllZeroWeights when no weight is positive.
std::vector<std::size_t> multinomial_resample(std::span<const double> weights, std::size_t count,
                                              Rng& rng);

template <typename State>
struct BaselineStep {
  int time = 0;
  std::vector<State> states;
  std::vector<bool> alive;
  std::size_t alive_count = 0;
};

struct CollapseRecord {
  int step = 0;                            // first time with every weight zero
  std::vector<std::size_t> alive_counts;   // counts for times 1 .. step (last is 0)
};

/// Standard bootstrap filter with indicator weights, resampling every step.
template <typename State>
struct BaselineRun {
  std::size_t n_particles = 0;
  std::vector<BaselineStep<State>> steps;  // includes the collapsed step, if any
  std::vector<double> log_nc_path;         // running sum of log(alive/N) for non-collapsed steps
  std::optional<CollapseRecord> collapse;
  std::uint64_t seed = 0;

  bool collapsed() const { return collapse.has_value(); }
  int completed_steps() const {
    return collapsed() ? collapse->step - 1 : static_cast<int>(steps.size());
  }

  /// Log normalizing-constant estimate through `time`; empty at or after a collapse.
  std::optional<double> log_normalizer(int time) const {
    if (time < 1 || time > completed_steps()) return std::nullopt;
    return log_nc_path[static_cast<std::size_t>(time) - 1];
  }
  std::optional<double> log_normalizer() const { return log_normalizer(completed_steps()); }
};

template <typename State>
BaselineRun<State> run_standard_filter(const FeynmanKacModel<State>& model, std::size_t n_particles,
                                       std::uint64_t seed) {
  if (n_particles < 1) throw std::invalid_argument("run_standard_filter: n_particles must be >= 1");
  Rng rng(seed);
  BaselineRun<State> run;
  run.n_particles = n_particles;
  run.seed = seed;
  std::vector<double> weights(n_particles);
  std::vector<std::size_t> parents;
  std::vector<std::size_t> counts;
  double log_nc = 0.0;

  for (int p = 1; p <= model.horizon; ++p) {
    BaselineStep<State> step;
    step.time = p;
    step.states.reserve(n_particles);
    step.alive.resize(n_particles);
    for (std::size_t i = 0; i < n_particles; ++i) {
      const State& from = p == 1 ? model.initial_point : run.steps.back().states[parents[i]];
      step.states.push_back(model.sample(p, from, rng));
      const bool a = model.alive(p, step.states.back());
      step.alive[i] = a;
      weights[i] = a ? 1.0 : 0.0;
      step.alive_count += a ? 1 : 0;
    }
    counts.push_back(step.alive_count);
    run.steps.push_back(std::move(step));
    try {
      parents = multinomial_resample(weights, n_particles, rng);
    } catch (const AllZeroWeights&) {
      run.collapse = CollapseRecord{p, counts};
      return run;
    }
    log_nc += std::log(static_cast<double>(counts.back()) / static_cast<double>(n_particles));
    run.log_nc_path.push_back(log_nc);
  }
  return run;
}

/// eta_p(G_p) estimate: alive fraction at `time`; empty if the step is missing.
template <typename State>
std::optional<double> baseline_alive_fraction(const BaselineRun<State>& run, int time) {
  if (time < 1 || time > static_cast<int>(run.steps.size())) return std::nullopt;
  return static_cast<double>(run.steps[time - 1].alive_count) / static_cast<double>(run.n_particles);
}

/// Mean of phi over the alive particles at `time`; empty at or after collapse.
template <typename State>
std::optional<double> baseline_filter_estimate(const BaselineRun<State>& run, int time,
                                               const TestFunction<State>& phi) {
  if (time < 1 || time > run.completed_steps()) return std::nullopt;
  const auto& step = run.steps[time - 1];
  double sum = 0.0;
  for (std::size_t i = 0; i < step.states.size(); ++i)
    if (step.alive[i]) sum += phi(step.states[i]);
  return sum / static_cast<double>(step.alive_count);
}

}  // namespace alive
