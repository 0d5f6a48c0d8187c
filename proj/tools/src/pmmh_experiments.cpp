#include <cmath>
#include <set>

#include "alive/models/linear_gaussian.hpp"
#include "alive/models/returns_csv.hpp"
#include "alive/models/stochastic_volatility.hpp"
#include "alive/oracles/grid_posterior.hpp"
#include "alive/parallel.hpp"
#include "alive/pmmh.hpp"
#include "internal.hpp"

namespace alive::experiments::detail {

namespace {

CsvTable trace_table(const ChainRecord& record, const std::vector<std::string>& names) {
  std::vector<std::string> header{"iteration"};
  header.insert(header.end(), names.begin(), names.end());
  for (const char* h : {"log_gamma_hat", "accepted", "cap_exceeded", "trials"}) header.emplace_back(h);
  CsvTable t(header);
  for (const auto& row : record.trace) {
    std::vector<std::string> fields{std::to_string(row.iteration)};
    for (double x : row.theta) fields.push_back(format_number(x));
    fields.push_back(format_number(row.log_gamma_hat));
    fields.push_back(row.accepted ? "1" : "0");
    fields.push_back(row.cap_exceeded ? "1" : "0");
    fields.push_back(std::to_string(row.trials));
    t.add_row(std::move(fields));
  }
  return t;
}

std::size_t distinct_accepted(const ChainRecord& record) {
  std::set<Theta> seen;
  for (const auto& row : record.trace)
    if (row.accepted) seen.insert(row.theta);
  return seen.size();
}

}  // namespace

void run_pmmh_sv(const ExperimentConfig& config, ArtifactManifest& manifest) {
  const auto& sv = config.sv;
  std::vector<double> observations;
  if (sv.data_csv) {
    observations = load_returns_csv(*sv.data_csv);
  } else {
    observations = sv_simulate(sv.truth, sv.horizon, sv.z0, derive_seed(config.seed, 1)).observations;
  }
  const auto hmm = make_sv_hmm(observations, sv.epsilon, sv.z0);
  const StableParams noise = sv.truth.noise;
  ModelFamily family = [hmm, noise](const Theta& th) {
    return compile_abc_hmm(hmm, StableSvParams{th[0], th[1], th[2], noise});
  };

  ChainConfig chain;
  chain.priors.components = {NormalPrior{0.0, 10.0}, InverseGammaPrior{2.0, 1.0 / 100.0},
                             InverseGammaPrior{2.0, 1.0 / 50.0}};
  chain.proposals.components = {RandomWalkNormal{sv.beta_step_var}, GammaCentered{sv.c_step_var},
                                GammaCentered{sv.phi_step_var}};
  chain.iterations = sv.iterations;
  chain.burn_in = sv.burn_in;
  chain.thinning = sv.thinning;
  chain.seed = derive_seed(config.seed, 2);

  const auto record = run_chain(chain, alive_likelihood(family, sv.n_alive, sv.trial_cap));
  auto t = trace_table(record, {"beta", "c", "phi"});
  stamp(t, config, manifest.config_hash);
  emit(t, "pmmh_sv_trace.csv", config, manifest);

  for (const auto& row : record.trace)
    if (row.cap_exceeded) manifest.cap_events.push_back({"pmmh_sv", row.iteration, 0, 0});
  const double per_point = record.mean_trials_per_iteration() / static_cast<double>(observations.size());
  manifest.summary["pmmh_sv"] = {{"acceptance_rate", record.acceptance_rate()},
                                 {"accepted", record.accepted},
                                 {"distinct_accepted_theta", distinct_accepted(record)},
                                 {"cap_events", record.cap_events},
                                 {"mean_simulations_per_iteration", record.mean_trials_per_iteration()},
                                 {"mean_simulations_per_iteration_and_point", per_point},
                                 {"observations", observations.size()}};
}

void run_pmmh_lg_validation(const ExperimentConfig& config, ArtifactManifest& manifest) {
  const auto& v = config.lg_validation;
  const LinearGaussianParams truth{v.true_sigma_v2, v.sigma_w2, 2.0, 0.0};
  const auto data = lg_simulate(truth, v.horizon, derive_seed(config.seed, 1));

  std::vector<LinearGaussianParams> grid;
  for (double s : v.sigma_v2_grid) grid.push_back({s, v.sigma_w2, 2.0, 0.0});
  const std::vector<double> flat_prior(grid.size(), 0.0);
  const auto posterior = grid_abc_posterior(grid, flat_prior, data.observations, v.epsilon);

  const auto observations = data.observations;
  const double sigma_w2 = v.sigma_w2, epsilon = v.epsilon;
  ModelFamily family = [observations, sigma_w2, epsilon](const Theta& th) {
    return make_lg_model({th[0], sigma_w2, 2.0, 0.0}, observations, epsilon);
  };

  std::vector<ChainRecord> records(v.n_alive.size());
  parallel_for(
      v.n_alive.size(),
      [&](std::size_t i) {
        ChainConfig chain;
        chain.priors.components = {DiscreteUniformPrior{v.sigma_v2_grid}};
        chain.proposals.components = {UniformGridJump{v.sigma_v2_grid}};
        chain.iterations = v.iterations;
        chain.seed = derive_seed(config.seed, 10 + i);
        records[i] = run_chain(chain, alive_likelihood(family, v.n_alive[i], v.trial_cap));
      },
      config.threads);

  std::vector<std::string> header{"sigma_v2", "grid_posterior"};
  for (auto n : v.n_alive) header.push_back("chain_freq_N" + std::to_string(n));
  CsvTable table(header);
  stamp(table, config, manifest.config_hash);
  std::vector<std::vector<double>> freq(records.size(), std::vector<double>(grid.size(), 0.0));
  nlohmann::json tv = nlohmann::json::object();
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (const auto& row : records[i].trace) {
      if (row.iteration == 0) continue;
      for (std::size_t g = 0; g < grid.size(); ++g)
        if (row.theta[0] == v.sigma_v2_grid[g]) freq[i][g] += 1.0;
    }
    for (auto& f : freq[i]) f /= static_cast<double>(v.iterations);
    double d = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) d += std::abs(freq[i][g] - posterior[g]);
    tv["N" + std::to_string(v.n_alive[i])] = 0.5 * d;
    auto trace = trace_table(records[i], {"sigma_v2"});
    stamp(trace, config, manifest.config_hash);
    trace.add_meta("n_alive", std::to_string(v.n_alive[i]));
    emit(trace, "pmmh_lg_trace_N" + std::to_string(v.n_alive[i]) + ".csv", config, manifest);
  }
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<std::string> row{format_number(v.sigma_v2_grid[g]), format_number(posterior[g])};
    for (const auto& f : freq) row.push_back(format_number(f[g]));
    table.add_row(std::move(row));
  }
  emit(table, "pmmh_lg_validation.csv", config, manifest);
  manifest.summary["pmmh_lg_validation"] = {{"total_variation", tv}};
}

}  // namespace alive::experiments::detail
