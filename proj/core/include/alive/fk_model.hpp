#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "alive/rng.hpp"

namespace alive {

/// Feynman-Kac model with indicator potentials G_p = 1{x in B_p}.
///
/// The state type is opaque here; concrete models decide what a state is.
/// Time is 1-based: the kernel at time 1 moves away from `initial_point`, which
/// is never itself a particle. Models are immutable after construction and can
/// be shared across concurrent runs as long as each run owns its own Rng.
template <typename State>
struct FeynmanKacModel {
  using state_type = State;
  using Kernel = std::function<State(int time, const State& from, Rng& rng)>;
  using Potential = std::function<bool(int time, const State& x)>;

  State initial_point{};
  int horizon = 1;
  Kernel kernel;
  Potential potential;

  State sample(int time, const State& from, Rng& rng) const { return kernel(time, from, rng); }
  bool alive(int time, const State& x) const { return potential(time, x); }
};

template <typename State>
struct Particle {
  State state;
  bool alive = false;
};

template <typename State>
Particle<State> make_particle(const FeynmanKacModel<State>& model, int time, State state) {
  const bool alive = model.alive(time, state);
  return Particle<State>{std::move(state), alive};
}

/// One state per time step, x_1 .. x_n.
template <typename State>
struct Trajectory {
  std::vector<State> states;

  std::size_t size() const { return states.size(); }
  const State& operator[](std::size_t i) const { return states[i]; }
};

/// Bounded test function phi. If a bound is declared, debug builds assert it
/// on every evaluation.
template <typename State>
class TestFunction {
 public:
  using Fn = std::function<double(const State&)>;

  explicit TestFunction(Fn fn, std::optional<double> bound = std::nullopt)
      : fn_(std::move(fn)), bound_(bound) {}

  static TestFunction constant(double c) {
    return TestFunction([c](const State&) { return c; }, std::abs(c));
  }

  double operator()(const State& x) const {
    const double v = fn_(x);
    assert(!bound_ || std::abs(v) <= *bound_);
    return v;
  }

  std::optional<double> bound() const { return bound_; }

 private:
  Fn fn_;
  std::optional<double> bound_;
};

/// Result of forward-simulating probes through a model without selection.
struct ValidationReport {
  std::vector<double> alive_fraction;  // index p-1 holds the fraction at time p
  std::vector<int> degenerate_steps;   // times where no probe was alive
  bool ok() const { return degenerate_steps.empty(); }
};

/// Simulates `probe_count` independent paths from x_0 and reports the observed
/// alive fraction at each time. A step with no alive probe is flagged as a
/// likely null success set. Report-only: never throws on degenerate models.
template <typename State>
ValidationReport validate_model(const FeynmanKacModel<State>& model, std::size_t probe_count,
                                std::uint64_t seed) {
  if (probe_count == 0) throw std::invalid_argument("validate_model: probe_count must be >= 1");
  Rng rng(seed);
  const auto horizon = static_cast<std::size_t>(model.horizon);
  std::vector<std::size_t> alive_counts(horizon, 0);
  for (std::size_t probe = 0; probe < probe_count; ++probe) {
    State x = model.initial_point;
    for (int p = 1; p <= model.horizon; ++p) {
      x = model.sample(p, x, rng);
      if (model.alive(p, x)) ++alive_counts[p - 1];
    }
  }
  ValidationReport report;
  report.alive_fraction.reserve(horizon);
  for (std::size_t i = 0; i < horizon; ++i) {
    report.alive_fraction.push_back(static_cast<double>(alive_counts[i]) /
                                    static_cast<double>(probe_count));
    if (alive_counts[i] == 0) report.degenerate_steps.push_back(static_cast<int>(i) + 1);
  }
  return report;
}

}  // namespace alive
