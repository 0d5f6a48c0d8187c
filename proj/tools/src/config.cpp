#include "alive/experiments/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace alive::experiments {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<ExperimentId, const char*>, 6> kIds{{
    {ExperimentId::lg_filtering_part1, "lg_filtering_part1"},
    {ExperimentId::lg_filtering_part2, "lg_filtering_part2"},
    {ExperimentId::nc_variance, "nc_variance"},
    {ExperimentId::pmmh_sv, "pmmh_sv"},
    {ExperimentId::pmmh_lg_validation, "pmmh_lg_validation"},
    {ExperimentId::identities, "identities"},
}};

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
void read_optional(const json& j, const char* key, std::optional<T>& out, const std::string& where) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out.reset();
    return;
  }
  T value{};
  read(j, key, value, where);
  out = value;
}

Variant parse_variant(const std::string& s) {
  if (s == "alive") return Variant::alive;
  if (s == "lgo") return Variant::lgo;
  throw ConfigError("unknown filter variant '" + s + "'");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void check_positive(const std::vector<double>& xs, const std::string& what) {
  require(!xs.empty(), what + " must be non-empty");
  for (double x : xs) require(x > 0.0, what + " entries must be > 0");
}

}  // namespace

const char* to_string(ExperimentId id) {
  for (const auto& [k, name] : kIds)
    if (k == id) return name;
  return "unknown";
}

ExperimentId parse_experiment_id(const std::string& name) {
  for (const auto& [k, s] : kIds)
    if (name == s) return k;
  throw ConfigError("unknown experiment id '" + name + "'");
}

ExperimentConfig ExperimentConfig::defaults(ExperimentId id) {
  ExperimentConfig c;
  c.id = id;
  switch (id) {
    case ExperimentId::lg_filtering_part2:
      c.lg.epsilon = {3.0, 6.0, 12.0};
      break;
    case ExperimentId::nc_variance:
      c.lg.outliers = false;
      break;
    default:
      break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  require(replicates >= 1, "replicates must be >= 1");
  require(horizon >= 1, "horizon must be >= 1");
  switch (id) {
    case ExperimentId::lg_filtering_part1:
    case ExperimentId::lg_filtering_part2:
    case ExperimentId::nc_variance:
      check_positive(lg.sigma_v2, "lg.sigma_v2");
      check_positive(lg.sigma_w2, "lg.sigma_w2");
      check_positive(lg.epsilon, "lg.epsilon");
      require(lg.n_alive >= 2, "lg.n_alive must be >= 2");
      require(lg.n_standard >= 1, "lg.n_standard must be >= 1");
      require(lg.trial_cap >= lg.n_alive, "lg.trial_cap must be >= lg.n_alive");
      if (lg.outliers) {
        require(lg.outlier_prob > 0.0 && lg.outlier_prob < 1.0, "lg.outlier_prob must be in (0, 1)");
        require(!lg.outlier_levels.empty(), "lg.outlier_levels must be non-empty");
      }
      if (lg.outlier_jump_window)
        require((*lg.outlier_jump_window)[0] <= (*lg.outlier_jump_window)[1],
                "lg.outlier_jump_window must be [lo, hi] with lo <= hi");
      if (id == ExperimentId::nc_variance) require(replicates >= 2, "nc_variance needs >= 2 replicates");
      break;
    case ExperimentId::pmmh_sv:
      require(sv.horizon >= 1, "sv.horizon must be >= 1");
      require(sv.iterations >= 1, "sv.iterations must be >= 1");
      require(sv.thinning >= 1, "sv.thinning must be >= 1");
      require(sv.n_alive >= 2, "sv.n_alive must be >= 2");
      require(sv.epsilon > 0.0, "sv.epsilon must be > 0");
      require(sv.beta_step_var > 0.0 && sv.c_step_var > 0.0 && sv.phi_step_var > 0.0,
              "sv proposal variances must be > 0");
      try {
        sv.truth.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("sv.truth: ") + e.what());
      }
      break;
    case ExperimentId::pmmh_lg_validation:
      check_positive(lg_validation.sigma_v2_grid, "lg_validation.sigma_v2_grid");
      require(lg_validation.true_sigma_v2 > 0.0, "lg_validation.true_sigma_v2 must be > 0");
      require(lg_validation.sigma_w2 > 0.0, "lg_validation.sigma_w2 must be > 0");
      require(lg_validation.epsilon > 0.0, "lg_validation.epsilon must be > 0");
      require(lg_validation.horizon >= 1 && lg_validation.horizon <= 4, "lg_validation.horizon must be in 1..4");
      require(lg_validation.iterations >= 1, "lg_validation.iterations must be >= 1");
      require(!lg_validation.n_alive.empty(), "lg_validation.n_alive must be non-empty");
      for (auto n : lg_validation.n_alive) require(n >= 2, "lg_validation.n_alive entries must be >= 2");
      break;
    case ExperimentId::identities:
      require(identities.replicates >= 1, "identities.replicates must be >= 1");
      for (double p : identities.p) require(p > 0.0 && p < 1.0, "identities.p must lie in (0, 1)");
      for (double p : identities.pair_p) require(p > 0.0 && p < 1.0, "identities.pair_p must lie in (0, 1)");
      for (auto n : identities.n) require(n >= 2, "identities.n entries must be >= 2");
      for (auto n : identities.pair_n) require(n >= 3, "identities.pair_n entries must be >= 3");
      break;
  }
}

nlohmann::json ExperimentConfig::to_json() const {
  json j;
  j["experiment"] = to_string(id);
  j["seed"] = seed;
  j["replicates"] = replicates;
  j["horizon"] = horizon;
  j["lg"] = {
      {"sigma_v2", lg.sigma_v2},
      {"sigma_w2", lg.sigma_w2},
      {"epsilon", lg.epsilon},
      {"z0", lg.z0},
      {"n_alive", lg.n_alive},
      {"n_standard", lg.n_standard},
      {"trial_cap", lg.trial_cap},
      {"variant", alive::to_string(lg.variant)},
      {"outliers", lg.outliers},
      {"outlier_prob", lg.outlier_prob},
      {"outlier_levels", lg.outlier_levels},
      {"data_seed", lg.data_seed ? json(*lg.data_seed) : json(nullptr)},
      {"outlier_jump_window", lg.outlier_jump_window ? json(*lg.outlier_jump_window) : json(nullptr)},
  };
  j["sv"] = {
      {"horizon", sv.horizon},
      {"iterations", sv.iterations},
      {"burn_in", sv.burn_in},
      {"thinning", sv.thinning},
      {"n_alive", sv.n_alive},
      {"trial_cap", sv.trial_cap},
      {"epsilon", sv.epsilon},
      {"z0", sv.z0},
      {"beta", sv.truth.beta},
      {"c", sv.truth.c},
      {"phi", sv.truth.phi},
      {"xi", {sv.truth.noise.scale, sv.truth.noise.skewness, sv.truth.noise.stability}},
      {"data_csv", sv.data_csv ? json(sv.data_csv->string()) : json(nullptr)},
      {"beta_step_var", sv.beta_step_var},
      {"c_step_var", sv.c_step_var},
      {"phi_step_var", sv.phi_step_var},
  };
  j["lg_validation"] = {
      {"sigma_v2_grid", lg_validation.sigma_v2_grid},
      {"true_sigma_v2", lg_validation.true_sigma_v2},
      {"sigma_w2", lg_validation.sigma_w2},
      {"epsilon", lg_validation.epsilon},
      {"horizon", lg_validation.horizon},
      {"iterations", lg_validation.iterations},
      {"n_alive", lg_validation.n_alive},
      {"trial_cap", lg_validation.trial_cap},
  };
  j["identities"] = {
      {"p", identities.p},
      {"n", identities.n},
      {"pair_p", identities.pair_p},
      {"pair_n", identities.pair_n},
      {"replicates", identities.replicates},
  };
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  reject_unknown(j, {"experiment", "seed", "output_dir", "replicates", "horizon", "threads", "lg", "sv",
                     "lg_validation", "identities"},
                 "config");
  if (!j.contains("experiment")) throw ConfigError("config: missing 'experiment'");
  std::string name;
  read(j, "experiment", name, "config");
  ExperimentConfig c = defaults(parse_experiment_id(name));
  read(j, "seed", c.seed, "config");
  std::string out;
  read(j, "output_dir", out, "config");
  if (!out.empty()) c.output_dir = out;
  read(j, "replicates", c.replicates, "config");
  read(j, "horizon", c.horizon, "config");
  read(j, "threads", c.threads, "config");

  if (j.contains("lg")) {
    const auto& s = j.at("lg");
    reject_unknown(s, {"sigma_v2", "sigma_w2", "epsilon", "z0", "n_alive", "n_standard", "trial_cap", "variant",
                       "outliers", "outlier_prob", "outlier_levels", "data_seed", "outlier_jump_window"},
                   "lg");
    read(s, "sigma_v2", c.lg.sigma_v2, "lg");
    read(s, "sigma_w2", c.lg.sigma_w2, "lg");
    read(s, "epsilon", c.lg.epsilon, "lg");
    read(s, "z0", c.lg.z0, "lg");
    read(s, "n_alive", c.lg.n_alive, "lg");
    read(s, "n_standard", c.lg.n_standard, "lg");
    read(s, "trial_cap", c.lg.trial_cap, "lg");
    if (s.contains("variant")) {
      std::string v;
      read(s, "variant", v, "lg");
      c.lg.variant = parse_variant(v);
    }
    read(s, "outliers", c.lg.outliers, "lg");
    read(s, "outlier_prob", c.lg.outlier_prob, "lg");
    read(s, "outlier_levels", c.lg.outlier_levels, "lg");
    read_optional(s, "data_seed", c.lg.data_seed, "lg");
    read_optional(s, "outlier_jump_window", c.lg.outlier_jump_window, "lg");
  }
  if (j.contains("sv")) {
    const auto& s = j.at("sv");
    reject_unknown(s, {"horizon", "iterations", "burn_in", "thinning", "n_alive", "trial_cap", "epsilon", "z0",
                       "beta", "c", "phi", "xi", "data_csv", "beta_step_var", "c_step_var", "phi_step_var"},
                   "sv");
    read(s, "horizon", c.sv.horizon, "sv");
    read(s, "iterations", c.sv.iterations, "sv");
    read(s, "burn_in", c.sv.burn_in, "sv");
    read(s, "thinning", c.sv.thinning, "sv");
    read(s, "n_alive", c.sv.n_alive, "sv");
    read(s, "trial_cap", c.sv.trial_cap, "sv");
    read(s, "epsilon", c.sv.epsilon, "sv");
    read(s, "z0", c.sv.z0, "sv");
    read(s, "beta", c.sv.truth.beta, "sv");
    read(s, "c", c.sv.truth.c, "sv");
    read(s, "phi", c.sv.truth.phi, "sv");
    if (s.contains("xi")) {
      std::array<double, 3> xi{};
      read(s, "xi", xi, "sv");
      c.sv.truth.noise = StableParams{xi[0], xi[1], xi[2]};
    }
    std::optional<std::string> csv;
    read_optional(s, "data_csv", csv, "sv");
    if (csv) c.sv.data_csv = *csv;
    read(s, "beta_step_var", c.sv.beta_step_var, "sv");
    read(s, "c_step_var", c.sv.c_step_var, "sv");
    read(s, "phi_step_var", c.sv.phi_step_var, "sv");
  }
  if (j.contains("lg_validation")) {
    const auto& s = j.at("lg_validation");
    reject_unknown(s, {"sigma_v2_grid", "true_sigma_v2", "sigma_w2", "epsilon", "horizon", "iterations", "n_alive",
                       "trial_cap"},
                   "lg_validation");
    read(s, "sigma_v2_grid", c.lg_validation.sigma_v2_grid, "lg_validation");
    read(s, "true_sigma_v2", c.lg_validation.true_sigma_v2, "lg_validation");
    read(s, "sigma_w2", c.lg_validation.sigma_w2, "lg_validation");
    read(s, "epsilon", c.lg_validation.epsilon, "lg_validation");
    read(s, "horizon", c.lg_validation.horizon, "lg_validation");
    read(s, "iterations", c.lg_validation.iterations, "lg_validation");
    read(s, "n_alive", c.lg_validation.n_alive, "lg_validation");
    read(s, "trial_cap", c.lg_validation.trial_cap, "lg_validation");
  }
  if (j.contains("identities")) {
    const auto& s = j.at("identities");
    reject_unknown(s, {"p", "n", "pair_p", "pair_n", "replicates"}, "identities");
    read(s, "p", c.identities.p, "identities");
    read(s, "n", c.identities.n, "identities");
    read(s, "pair_p", c.identities.pair_p, "identities");
    read(s, "pair_n", c.identities.pair_n, "identities");
    read(s, "replicates", c.identities.replicates, "identities");
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return from_json(j);
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string text = config.to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace alive::experiments
