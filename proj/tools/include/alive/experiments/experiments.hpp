#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "alive/experiments/config.hpp"
#include "alive/experiments/csv.hpp"
#include "alive/models/linear_gaussian.hpp"

namespace alive::experiments {

/// A per-replicate event that did not abort the batch.
struct ReplicateEvent {
  std::string scenario;
  std::size_t replicate = 0;
  int step = 0;
  std::uint64_t trials = 0;  // cap events only
};

struct ArtifactManifest {
  ExperimentConfig config;
  std::string config_hash;
  std::vector<std::pair<std::string, std::size_t>> files;  // name, data rows
  std::vector<ReplicateEvent> collapses;
  std::vector<ReplicateEvent> cap_events;
  double wall_time_seconds = 0.0;
  nlohmann::json summary = nlohmann::json::object();

  nlohmann::json to_json() const;
  void write(const std::filesystem::path& path) const;
};

/// Runs the configured experiment, writes its CSV files and manifest.json into
/// config.output_dir and returns the manifest. Cap and collapse events are
/// recorded, never fatal.
ArtifactManifest run_experiment(const ExperimentConfig& config);

// ---- linear-Gaussian building blocks -------------------------------------

struct LgScenario {
  LinearGaussianParams params;
  double epsilon = 1.0;
  std::size_t index = 0;
  std::string label;
};

std::vector<LgScenario> lg_scenarios(const LgSettings& settings);

struct LgDataset {
  LgData clean;
  std::vector<double> observations;  // with outliers, if any
  std::vector<std::size_t> outliers;
  std::uint64_t data_seed = 0;
};

LgDataset make_lg_dataset(const LgSettings& settings, const LinearGaussianParams& params, int horizon,
                          std::uint64_t data_seed);

/// (smallest, largest) jump |y_k - y_{k-1}| or |y_{k+1} - y_k| into or out of an
/// outlier. Empty without outliers.
std::optional<std::pair<double, double>> outlier_jump_range(const LgDataset& data);

/// First seed >= `start` whose dataset has an outlier and all outlier jumps in
/// [lo, hi]. Throws ConfigError after `max_candidates` seeds.
std::uint64_t find_outlier_data_seed(const LgSettings& settings, const LinearGaussianParams& params,
                                     int horizon, double lo, double hi, std::uint64_t start,
                                     std::uint64_t max_candidates = 100000);

/// Data seed used for a scenario: fixed, derived from the run seed, or scanned.
std::uint64_t scenario_data_seed(const ExperimentConfig& config, const LgScenario& scenario);

/// Per-step summaries of one alive run and one standard run on the same data.
/// Index k holds time k + 1; an empty optional means the run did not reach it.
struct LgReplicate {
  std::vector<std::optional<double>> alive_mean;
  std::vector<std::optional<double>> alive_log_nc;  // through time k + 1, including its factor
  std::vector<std::size_t> alive_stopping_time;
  std::optional<int> alive_cap_step;
  std::uint64_t alive_cap_trials = 0;

  std::vector<std::optional<double>> standard_mean;
  std::vector<std::optional<double>> standard_log_nc;
  std::vector<std::size_t> standard_alive_count;
  std::optional<int> standard_collapse_step;
};

LgReplicate run_lg_replicate(const LgScenario& scenario, const LgSettings& settings,
                             const std::vector<double>& observations, std::uint64_t seed,
                             bool run_standard = true);

// ---- relative variance -----------------------------------------------------

struct RelativeVarianceSeries {
  std::vector<double> rel_var;       // sample variance of gamma_hat / reference, NaN if unavailable
  std::vector<double> log_rel_var;   // its log, computed without overflow
  std::vector<double> jackknife_se;  // jackknife standard error of rel_var
  std::vector<std::size_t> used;     // replicates contributing at each step
};

/// log_estimates[r][k] is replicate r's log gamma estimate at time k + 1.
/// NaN entries are skipped (run did not reach that step); -inf is a zero
/// estimate. Each step is shifted by its maximum before exponentiating.
RelativeVarianceSeries relative_variance_report(const std::vector<std::vector<double>>& log_estimates,
                                                std::span<const double> log_reference);

/// log of the mean of exp(x) over the non-NaN entries; NaN if none.
double log_mean_exp(std::span<const double> xs);

// ---- single runs for the CLI -----------------------------------------------

enum class SingleFilterKind { alive, lgo, standard };

struct SingleFilterResult {
  CsvTable table;
  std::optional<int> cap_step;
  std::optional<int> collapse_step;
};

/// One filter on the first scenario of config.lg. Does not throw on cap or
/// collapse; the caller decides.
SingleFilterResult run_single_filter(const ExperimentConfig& config, SingleFilterKind kind);

}  // namespace alive::experiments
