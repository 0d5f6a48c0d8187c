#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "alive/errors.hpp"
#include "alive/experiments/config.hpp"
#include "alive/experiments/experiments.hpp"

namespace ex = alive::experiments;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRun = 3;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> replicates;
  std::optional<int> horizon;
  std::optional<std::size_t> n_alive;
  std::optional<double> epsilon;
  std::optional<std::string> variant;
  std::optional<std::uint64_t> cap;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--replicates", o.replicates, "replicate count");
  cmd->add_option("--horizon", o.horizon, "number of time steps");
  cmd->add_option("--n-alive", o.n_alive, "alive-particle target N");
  cmd->add_option("--epsilon", o.epsilon, "ABC tolerance (replaces the epsilon list)");
  cmd->add_option("--variant", o.variant, "filter variant")
      ->check(CLI::IsMember({"alive", "lgo", "standard"}));
  cmd->add_option("--cap", o.cap, "per-step trial cap");
}

ex::ExperimentConfig build_config(const Overrides& o, ex::ExperimentId fallback) {
  auto c = o.config_path.empty() ? ex::ExperimentConfig::defaults(fallback) : ex::ExperimentConfig::load(o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.output_dir = *o.out;
  if (o.replicates) {
    if (c.id == ex::ExperimentId::identities)
      c.identities.replicates = *o.replicates;
    else
      c.replicates = *o.replicates;
  }
  if (o.horizon) {
    c.horizon = *o.horizon;
    c.sv.horizon = *o.horizon;
  }
  if (o.n_alive) {
    c.lg.n_alive = *o.n_alive;
    c.sv.n_alive = *o.n_alive;
    c.lg_validation.n_alive = {*o.n_alive};
  }
  if (o.epsilon) {
    c.lg.epsilon = {*o.epsilon};
    c.sv.epsilon = *o.epsilon;
    c.lg_validation.epsilon = *o.epsilon;
  }
  if (o.variant && *o.variant != "standard")
    c.lg.variant = *o.variant == "lgo" ? alive::Variant::lgo : alive::Variant::alive;
  if (o.cap) {
    c.lg.trial_cap = *o.cap;
    c.sv.trial_cap = *o.cap;
    c.lg_validation.trial_cap = *o.cap;
  }
  c.validate();
  return c;
}

void print_manifest(const ex::ArtifactManifest& m) {
  std::cout << "experiment " << ex::to_string(m.config.id) << " seed=" << m.config.seed
            << " hash=" << m.config_hash << " wall=" << m.wall_time_seconds << "s\n";
  for (const auto& [name, rows] : m.files) std::cout << "  " << (m.config.output_dir / name).string() << " (" << rows << " rows)\n";
  if (!m.collapses.empty()) std::cout << "  standard-filter collapses: " << m.collapses.size() << "\n";
  if (!m.cap_events.empty()) std::cout << "  trial-cap events: " << m.cap_events.size() << "\n";
  if (!m.summary.empty()) std::cout << m.summary.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Alive particle filter experiments"};
  app.require_subcommand(1);

  Overrides filter_o, pmmh_o, exp_o, id_o;
  auto* filter = app.add_subcommand("filter", "run one filter on simulated linear-Gaussian data");
  add_common(filter, filter_o);
  auto* pmmh = app.add_subcommand("pmmh", "run a PMMH chain (pmmh_sv unless the config says otherwise)");
  add_common(pmmh, pmmh_o);
  auto* experiment = app.add_subcommand("experiment", "run a configured experiment batch");
  add_common(experiment, exp_o);
  std::string experiment_id;
  experiment->add_option("id", experiment_id, "experiment id when no --config is given");
  auto* identities = app.add_subcommand("identities", "Monte Carlo check of the negative-binomial identities");
  add_common(identities, id_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*filter) {
      auto c = build_config(filter_o, ex::ExperimentId::lg_filtering_part1);
      const std::string v = filter_o.variant.value_or(alive::to_string(c.lg.variant));
      const auto kind = v == "standard" ? ex::SingleFilterKind::standard
                                        : (v == "lgo" ? ex::SingleFilterKind::lgo : ex::SingleFilterKind::alive);
      const auto result = ex::run_single_filter(c, kind);
      const auto path = c.output_dir / ("filter_" + v + ".csv");
      result.table.write(path);
      std::cout << path.string() << " (" << result.table.rows() << " rows)\n";
      if (result.collapse_step) std::cout << "standard filter collapsed at step " << *result.collapse_step << "\n";
      if (result.cap_step) {
        std::cerr << "trial cap exceeded at step " << *result.cap_step << "\n";
        return kExitRun;
      }
      return kExitOk;
    }
    if (*pmmh) {
      auto c = build_config(pmmh_o, ex::ExperimentId::pmmh_sv);
      if (c.id != ex::ExperimentId::pmmh_sv && c.id != ex::ExperimentId::pmmh_lg_validation)
        throw ex::ConfigError("pmmh needs a pmmh_sv or pmmh_lg_validation config");
      print_manifest(ex::run_experiment(c));
      return kExitOk;
    }
    if (*experiment) {
      if (exp_o.config_path.empty() && experiment_id.empty())
        throw ex::ConfigError("experiment needs --config or an experiment id");
      const auto id = experiment_id.empty() ? ex::ExperimentId::identities : ex::parse_experiment_id(experiment_id);
      auto c = build_config(exp_o, id);
      print_manifest(ex::run_experiment(c));
      return kExitOk;
    }
    auto c = build_config(id_o, ex::ExperimentId::identities);
    if (c.id != ex::ExperimentId::identities) throw ex::ConfigError("identities needs an identities config");
    print_manifest(ex::run_experiment(c));
    return kExitOk;
  } catch (const ex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const alive::InitFailed& e) {
    std::cerr << e.what() << "\n";
    return kExitRun;
  } catch (const alive::CapExceeded& e) {
    std::cerr << e.what() << "\n";
    return kExitRun;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}
