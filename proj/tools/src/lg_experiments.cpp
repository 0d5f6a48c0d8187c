#include <cmath>
#include <cstdio>
#include <limits>

#include "alive/alive_filter.hpp"
#include "alive/baseline_filter.hpp"
#include "alive/models/abc_hmm.hpp"
#include "alive/oracles/kalman.hpp"
#include "alive/parallel.hpp"
#include "alive/rng.hpp"
#include "internal.hpp"

namespace alive::experiments {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

// Mean of the present values; empty if none.
std::optional<double> mean_of(const std::vector<std::optional<double>>& xs) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& x : xs)
    if (x) {
      sum += *x;
      ++n;
    }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

struct ScenarioSummary {
  std::vector<std::optional<double>> err_alive, err_standard;
  std::vector<std::optional<double>> mean_alive, mean_standard;
  std::vector<std::optional<double>> log_nc_alive, log_nc_standard;
  std::vector<double> mean_stopping_time, mean_alive_count;
  std::vector<std::size_t> standard_reps;
};

ScenarioSummary summarize(const std::vector<LgReplicate>& reps, const KalmanOutput& kalman, double epsilon,
                          int horizon) {
  ScenarioSummary s;
  const double log_ball = std::log(2.0 * epsilon);
  for (int k = 0; k < horizon; ++k) {
    std::vector<std::optional<double>> ea, es, ma, ms, na, ns;
    double t_sum = 0.0, c_sum = 0.0;
    std::size_t t_n = 0, c_n = 0, std_n = 0;
    const double ref = kalman.filtered_mean[k];
    const double ball = static_cast<double>(k + 1) * log_ball;
    for (const auto& r : reps) {
      if (const auto& m = r.alive_mean[k]) {
        ea.push_back(std::abs(*m - ref));
        ma.push_back(*m);
        na.push_back(*r.alive_log_nc[k] - ball);
      }
      if (const auto& m = r.standard_mean[k]) {
        es.push_back(std::abs(*m - ref));
        ms.push_back(*m);
        ns.push_back(*r.standard_log_nc[k] - ball);
        ++std_n;
      }
      if (static_cast<std::size_t>(k) < r.alive_stopping_time.size()) {
        t_sum += static_cast<double>(r.alive_stopping_time[k]);
        ++t_n;
      }
      if (static_cast<std::size_t>(k) < r.standard_alive_count.size()) {
        c_sum += static_cast<double>(r.standard_alive_count[k]);
        ++c_n;
      }
    }
    s.err_alive.push_back(mean_of(ea));
    s.err_standard.push_back(mean_of(es));
    s.mean_alive.push_back(mean_of(ma));
    s.mean_standard.push_back(mean_of(ms));
    s.log_nc_alive.push_back(mean_of(na));
    s.log_nc_standard.push_back(mean_of(ns));
    s.mean_stopping_time.push_back(t_n ? t_sum / static_cast<double>(t_n) : kNaN);
    s.mean_alive_count.push_back(c_n ? c_sum / static_cast<double>(c_n) : kNaN);
    s.standard_reps.push_back(std_n);
  }
  return s;
}

std::optional<double> log_ratio(const std::optional<double>& a, const std::optional<double>& b) {
  if (!a || !b || !(*a > 0.0) || !(*b > 0.0)) return std::nullopt;
  return std::log(*a / *b);
}

}  // namespace

std::vector<LgScenario> lg_scenarios(const LgSettings& settings) {
  std::vector<LgScenario> out;
  for (double sv : settings.sigma_v2)
    for (double sw : settings.sigma_w2)
      for (double eps : settings.epsilon) {
        LgScenario s;
        s.params = LinearGaussianParams{sv, sw, 2.0, settings.z0};
        s.epsilon = eps;
        s.index = out.size();
        s.label = "sv" + short_number(sv) + "_sw" + short_number(sw) + "_eps" + short_number(eps);
        out.push_back(std::move(s));
      }
  return out;
}

LgDataset make_lg_dataset(const LgSettings& settings, const LinearGaussianParams& params, int horizon,
                          std::uint64_t data_seed) {
  LgDataset d;
  d.data_seed = data_seed;
  d.clean = lg_simulate(params, horizon, data_seed);
  if (settings.outliers) {
    auto inj = inject_outliers(d.clean.observations, settings.outlier_prob, settings.outlier_levels,
                               derive_seed(data_seed, 1));
    d.observations = std::move(inj.observations);
    d.outliers = std::move(inj.replaced);
  } else {
    d.observations = d.clean.observations;
  }
  return d;
}

std::optional<std::pair<double, double>> outlier_jump_range(const LgDataset& data) {
  if (data.outliers.empty()) return std::nullopt;
  const auto& y = data.observations;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t k : data.outliers) {
    if (k > 0) {
      const double into = std::abs(y[k] - y[k - 1]);
      lo = std::min(lo, into);
      hi = std::max(hi, into);
    }
    if (k + 1 < y.size()) {
      const double out = std::abs(y[k + 1] - y[k]);
      lo = std::min(lo, out);
      hi = std::max(hi, out);
    }
  }
  return std::make_pair(lo, hi);
}

std::uint64_t find_outlier_data_seed(const LgSettings& settings, const LinearGaussianParams& params, int horizon,
                                     double lo, double hi, std::uint64_t start, std::uint64_t max_candidates) {
  if (!settings.outliers) throw ConfigError("outlier_jump_window needs lg.outliers = true");
  for (std::uint64_t s = start; s < start + max_candidates; ++s) {
    const auto range = outlier_jump_range(make_lg_dataset(settings, params, horizon, s));
    if (range && range->first >= lo && range->second <= hi) return s;
  }
  throw ConfigError("no data seed in [" + std::to_string(start) + ", " + std::to_string(start + max_candidates) +
                    ") has all outlier jumps inside the window");
}

std::uint64_t scenario_data_seed(const ExperimentConfig& config, const LgScenario& scenario) {
  const auto& lg = config.lg;
  if (lg.outlier_jump_window)
    return find_outlier_data_seed(lg, scenario.params, config.horizon, (*lg.outlier_jump_window)[0],
                                  (*lg.outlier_jump_window)[1], lg.data_seed.value_or(1));
  if (lg.data_seed) return *lg.data_seed;
  return derive_seed(config.seed, 1000 + scenario.index);
}

LgReplicate run_lg_replicate(const LgScenario& scenario, const LgSettings& settings,
                             const std::vector<double>& observations, std::uint64_t seed, bool run_standard) {
  const auto model = make_lg_model(scenario.params, observations, scenario.epsilon);
  const auto horizon = observations.size();
  const auto phi = latent_mean_fn();
  LgReplicate r;
  r.alive_mean.assign(horizon, std::nullopt);
  r.alive_log_nc.assign(horizon, std::nullopt);
  r.standard_mean.assign(horizon, std::nullopt);
  r.standard_log_nc.assign(horizon, std::nullopt);

  FilterOptions opts;
  opts.n_alive = settings.n_alive;
  opts.trial_cap = settings.trial_cap;
  opts.variant = settings.variant;
  opts.lean = true;
  FilterRun<AbcState> run;
  try {
    run = run_filter(model, opts, derive_seed(seed, 0));
  } catch (const FilterAborted<AbcState>& e) {
    run = e.partial_run();
    r.alive_cap_step = e.step();
    r.alive_cap_trials = e.trials();
  }
  double log_nc = 0.0;
  for (std::size_t k = 0; k < run.steps.size(); ++k) {
    const auto& step = run.steps[k];
    log_nc += log_step_factor(run.n_alive, step.stopping_time);
    r.alive_mean[k] = filter_estimate(step, phi);
    r.alive_log_nc[k] = log_nc;
    r.alive_stopping_time.push_back(step.stopping_time);
  }

  if (run_standard) {
    const auto base = run_standard_filter(model, settings.n_standard, derive_seed(seed, 1));
    for (const auto& step : base.steps) r.standard_alive_count.push_back(step.alive_count);
    for (int t = 1; t <= base.completed_steps(); ++t) {
      r.standard_mean[t - 1] = baseline_filter_estimate(base, t, phi);
      r.standard_log_nc[t - 1] = base.log_normalizer(t);
    }
    if (base.collapse) r.standard_collapse_step = base.collapse->step;
  }
  return r;
}

namespace detail {

void run_lg_family(const ExperimentConfig& config, ArtifactManifest& manifest) {
  const auto& lg = config.lg;
  const bool part2 = config.id == ExperimentId::lg_filtering_part2;
  const bool nc = config.id == ExperimentId::nc_variance;
  nlohmann::json scenarios = nlohmann::json::array();

  for (const auto& scenario : lg_scenarios(lg)) {
    const std::uint64_t data_seed = scenario_data_seed(config, scenario);
    const auto data = make_lg_dataset(lg, scenario.params, config.horizon, data_seed);
    const auto kalman = kalman_filter(scenario.params, data.observations);
    const std::uint64_t scenario_seed = derive_seed(config.seed, scenario.index);

    std::vector<LgReplicate> reps(config.replicates);
    parallel_for(
        config.replicates,
        [&](std::size_t r) {
          reps[r] = run_lg_replicate(scenario, lg, data.observations, derive_seed(scenario_seed, r));
        },
        config.threads);

    std::size_t collapsed = 0, capped = 0;
    for (std::size_t r = 0; r < reps.size(); ++r) {
      if (reps[r].standard_collapse_step) {
        manifest.collapses.push_back({scenario.label, r, *reps[r].standard_collapse_step, 0});
        ++collapsed;
      }
      if (reps[r].alive_cap_step) {
        manifest.cap_events.push_back({scenario.label, r, *reps[r].alive_cap_step, reps[r].alive_cap_trials});
        ++capped;
      }
    }
    nlohmann::json outlier_steps = nlohmann::json::array();
    for (auto k : data.outliers) outlier_steps.push_back(k + 1);
    scenarios.push_back({{"label", scenario.label},
                         {"data_seed", data_seed},
                         {"outlier_times", outlier_steps},
                         {"standard_collapses", collapsed},
                         {"alive_cap_events", capped}});

    const auto s = summarize(reps, kalman, scenario.epsilon, config.horizon);
    std::vector<char> is_outlier(static_cast<std::size_t>(config.horizon), 0);
    for (auto k : data.outliers) is_outlier[k] = 1;
    auto time = [](int k) { return std::to_string(k + 1); };

    if (nc) {
      std::vector<std::vector<double>> alive_log(reps.size()), std_log(reps.size());
      for (std::size_t r = 0; r < reps.size(); ++r) {
        for (int k = 0; k < config.horizon; ++k) {
          alive_log[r].push_back(reps[r].alive_log_nc[k].value_or(kNaN));
          const bool gone = reps[r].standard_collapse_step && k + 1 >= *reps[r].standard_collapse_step;
          std_log[r].push_back(gone ? -std::numeric_limits<double>::infinity()
                                    : reps[r].standard_log_nc[k].value_or(kNaN));
        }
      }
      // reference: replicate mean of the alive estimate (unbiased for gamma_p)
      std::vector<double> reference;
      for (int k = 0; k < config.horizon; ++k) {
        std::vector<double> col;
        for (const auto& row : alive_log) col.push_back(row[k]);
        reference.push_back(log_mean_exp(col));
      }
      const auto ra = relative_variance_report(alive_log, reference);
      const auto rs = relative_variance_report(std_log, reference);
      CsvTable t({"time", "log_relvar_alive", "se_alive", "log_relvar_standard", "se_standard", "log_reference"});
      stamp(t, config, manifest.config_hash);
      t.add_meta("scenario", scenario.label);
      for (int k = 0; k < config.horizon; ++k)
        t.add_row({time(k), format_number(ra.log_rel_var[k]), format_number(ra.jackknife_se[k]),
                   format_number(rs.log_rel_var[k]), format_number(rs.jackknife_se[k]),
                   format_number(reference[k])});
      emit(t, "fig4_" + scenario.label + ".csv", config, manifest);
      continue;
    }

    if (!part2) {
      CsvTable f1({"time", "log_error_ratio", "err_alive", "err_standard", "standard_replicates"});
      CsvTable f2({"time", "err_alive", "err_standard", "outlier", "observation"});
      CsvTable f3({"time", "log_nc_eps0_reference", "log_nc_alive", "log_nc_standard"});
      CsvTable f5({"time", "mean_stopping_time", "stopping_time_rep0", "mean_standard_alive"});
      for (auto* t : {&f1, &f2, &f3, &f5}) {
        stamp(*t, config, manifest.config_hash);
        t->add_meta("scenario", scenario.label);
        t->add_meta("data_seed", std::to_string(data_seed));
      }
      for (int k = 0; k < config.horizon; ++k) {
        f1.add_row({time(k), format_number(log_ratio(s.err_alive[k], s.err_standard[k])),
                    format_number(s.err_alive[k]), format_number(s.err_standard[k]),
                    std::to_string(s.standard_reps[k])});
        f2.add_row({time(k), format_number(s.err_alive[k]), format_number(s.err_standard[k]),
                    is_outlier[k] ? "1" : "0", format_number(data.observations[k])});
        f3.add_row({time(k), format_number(kalman.log_likelihood_path[k]), format_number(s.log_nc_alive[k]),
                    format_number(s.log_nc_standard[k])});
        const auto& rep0 = reps.front().alive_stopping_time;
        f5.add_row({time(k), format_number(s.mean_stopping_time[k]),
                    static_cast<std::size_t>(k) < rep0.size() ? std::to_string(rep0[k]) : std::string(),
                    format_number(s.mean_alive_count[k])});
      }
      emit(f1, "fig1_" + scenario.label + ".csv", config, manifest);
      emit(f2, "fig2_" + scenario.label + ".csv", config, manifest);
      emit(f3, "fig3_" + scenario.label + ".csv", config, manifest);
      emit(f5, "fig5_" + scenario.label + ".csv", config, manifest);
    } else {
      CsvTable f6({"time", "mean_stopping_time", "stopping_time_rep0", "mean_standard_alive", "outlier"});
      CsvTable f7({"time", "observation", "latent", "kalman_mean", "alive_mean", "standard_mean"});
      CsvTable f8({"time", "log_error_ratio", "err_alive", "err_standard", "standard_replicates", "outlier"});
      for (auto* t : {&f6, &f7, &f8}) {
        stamp(*t, config, manifest.config_hash);
        t->add_meta("scenario", scenario.label);
        t->add_meta("data_seed", std::to_string(data_seed));
      }
      for (int k = 0; k < config.horizon; ++k) {
        const std::string mark = is_outlier[k] ? "1" : "0";
        const auto& rep0 = reps.front().alive_stopping_time;
        f6.add_row({time(k), format_number(s.mean_stopping_time[k]),
                    static_cast<std::size_t>(k) < rep0.size() ? std::to_string(rep0[k]) : std::string(),
                    format_number(s.mean_alive_count[k]), mark});
        f7.add_row({time(k), format_number(data.observations[k]), format_number(data.clean.latent[k]),
                    format_number(kalman.filtered_mean[k]), format_number(s.mean_alive[k]),
                    format_number(s.mean_standard[k])});
        f8.add_row({time(k), format_number(log_ratio(s.err_alive[k], s.err_standard[k])),
                    format_number(s.err_alive[k]), format_number(s.err_standard[k]),
                    std::to_string(s.standard_reps[k]), mark});
      }
      emit(f6, "fig6_" + scenario.label + ".csv", config, manifest);
      emit(f7, "fig7_" + scenario.label + ".csv", config, manifest);
      emit(f8, "fig8_" + scenario.label + ".csv", config, manifest);
    }
  }
  manifest.summary["scenarios"] = std::move(scenarios);
}

}  // namespace detail

SingleFilterResult run_single_filter(const ExperimentConfig& config, SingleFilterKind kind) {
  const auto scenario = lg_scenarios(config.lg).front();
  const auto data = make_lg_dataset(config.lg, scenario.params, config.horizon, scenario_data_seed(config, scenario));
  const auto kalman = kalman_filter(scenario.params, data.observations);
  const auto model = make_lg_model(scenario.params, data.observations, scenario.epsilon);
  const auto phi = latent_mean_fn();

  SingleFilterResult result{CsvTable({"time", "observation", "kalman_mean", "filter_mean", "particles", "log_nc"}),
                            std::nullopt, std::nullopt};
  auto& t = result.table;
  t.add_meta("experiment", "filter");
  t.add_meta("seed", std::to_string(config.seed));
  t.add_meta("config_hash", config_hash(config));
  t.add_meta("scenario", scenario.label);
  t.add_meta("variant", kind == SingleFilterKind::standard ? "standard"
                                                           : (kind == SingleFilterKind::lgo ? "lgo" : "alive"));

  auto row = [&](int k, std::optional<double> mean, std::string particles, std::optional<double> log_nc) {
    t.add_row({std::to_string(k + 1), format_number(data.observations[k]), format_number(kalman.filtered_mean[k]),
               format_number(mean), std::move(particles), format_number(log_nc)});
  };

  if (kind == SingleFilterKind::standard) {
    const auto base = run_standard_filter(model, config.lg.n_standard, config.seed);
    if (base.collapse) result.collapse_step = base.collapse->step;
    for (int k = 0; k < config.horizon; ++k) {
      const bool reached = static_cast<std::size_t>(k) < base.steps.size();
      row(k, baseline_filter_estimate(base, k + 1, phi),
          reached ? std::to_string(base.steps[k].alive_count) : std::string(), base.log_normalizer(k + 1));
    }
    return result;
  }

  FilterOptions opts;
  opts.n_alive = config.lg.n_alive;
  opts.trial_cap = config.lg.trial_cap;
  opts.variant = kind == SingleFilterKind::lgo ? Variant::lgo : Variant::alive;
  opts.lean = true;
  FilterRun<AbcState> run;
  try {
    run = run_filter(model, opts, config.seed);
  } catch (const FilterAborted<AbcState>& e) {
    run = e.partial_run();
    result.cap_step = e.step();
  }
  double log_nc = 0.0;
  for (int k = 0; k < config.horizon; ++k) {
    if (static_cast<std::size_t>(k) < run.steps.size()) {
      const auto& step = run.steps[k];
      log_nc += log_step_factor(run.n_alive, step.stopping_time);
      row(k, filter_estimate(step, phi), std::to_string(step.stopping_time), log_nc);
    } else {
      row(k, std::nullopt, std::string(), std::nullopt);
    }
  }
  return result;
}

}  // namespace alive::experiments
