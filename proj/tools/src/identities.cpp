#include <cmath>

#include "alive/oracles/nb_identities.hpp"
#include "alive/parallel.hpp"
#include "alive/rng.hpp"
#include "internal.hpp"

namespace alive::experiments::detail {

void run_identities(const ExperimentConfig& config, ArtifactManifest& manifest) {
  const auto& s = config.identities;
  struct Job {
    bool pair;
    double p;
    std::size_t n;
  };
  std::vector<Job> jobs;
  for (double p : s.p)
    for (auto n : s.n) jobs.push_back({false, p, n});
  for (double p : s.pair_p)
    for (auto n : s.pair_n) jobs.push_back({true, p, n});

  std::vector<McEstimate> mc(jobs.size());
  std::vector<double> exact(jobs.size());
  parallel_for(
      jobs.size(),
      [&](std::size_t i) {
        const auto& j = jobs[i];
        const auto seed = derive_seed(config.seed, i);
        mc[i] = j.pair ? nb_pair_identity_mc(j.p, j.n, s.replicates, seed) : nb_identity_mc(j.p, j.n, s.replicates, seed);
        exact[i] = j.pair ? nb_pair_identity_exact(j.p, j.n) : nb_identity_exact(j.p, j.n);
      },
      config.threads);

  CsvTable t({"identity", "p", "N", "replicates", "mc_mean", "std_error", "target", "exact", "z_score"});
  stamp(t, config, manifest.config_hash);
  std::size_t within = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    t.add_row({jobs[i].pair ? "pair" : "single", format_number(jobs[i].p), std::to_string(jobs[i].n),
               std::to_string(mc[i].replicates), format_number(mc[i].mean), format_number(mc[i].std_error),
               format_number(mc[i].target), format_number(exact[i]), format_number(mc[i].z_score())});
    if (std::abs(mc[i].z_score()) < 3.0) ++within;
  }
  emit(t, "identities.csv", config, manifest);
  manifest.summary["identities"] = {{"rows", jobs.size()}, {"within_3_se", within}};
}

}  // namespace alive::experiments::detail
