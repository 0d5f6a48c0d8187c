#include <chrono>
#include <fstream>

#include "alive/rng.hpp"
#include "internal.hpp"

namespace alive::experiments {

namespace detail {

void stamp(CsvTable& table, const ExperimentConfig& config, const std::string& hash) {
  table.add_meta("experiment", to_string(config.id));
  table.add_meta("seed", std::to_string(config.seed));
  table.add_meta("config_hash", hash);
}

void emit(const CsvTable& table, const std::string& name, const ExperimentConfig& config,
          ArtifactManifest& manifest) {
  table.write(config.output_dir / name);
  manifest.files.emplace_back(name, table.rows());
}

}  // namespace detail

nlohmann::json ArtifactManifest::to_json() const {
  nlohmann::json j;
  j["config"] = config.to_json();
  j["config_hash"] = config_hash;
  j["seed"] = config.seed;
  j["generator"] = std::string(Rng::generator_name());
  j["wall_time_seconds"] = wall_time_seconds;
  auto& files_j = j["files"] = nlohmann::json::array();
  for (const auto& [name, rows] : files) files_j.push_back({{"name", name}, {"rows", rows}});
  auto events = [](const std::vector<ReplicateEvent>& es, bool with_trials) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : es) {
      nlohmann::json x{{"scenario", e.scenario}, {"replicate", e.replicate}, {"step", e.step}};
      if (with_trials) x["trials"] = e.trials;
      arr.push_back(std::move(x));
    }
    return arr;
  };
  j["collapse_events"] = events(collapses, false);
  j["cap_events"] = events(cap_events, true);
  j["summary"] = summary;
  return j;
}

void ArtifactManifest::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json().dump(2) << '\n';
}

ArtifactManifest run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  ArtifactManifest manifest;
  manifest.config = config;
  manifest.config_hash = config_hash(config);
  std::filesystem::create_directories(config.output_dir);

  switch (config.id) {
    case ExperimentId::lg_filtering_part1:
    case ExperimentId::lg_filtering_part2:
    case ExperimentId::nc_variance:
      detail::run_lg_family(config, manifest);
      break;
    case ExperimentId::pmmh_sv:
      detail::run_pmmh_sv(config, manifest);
      break;
    case ExperimentId::pmmh_lg_validation:
      detail::run_pmmh_lg_validation(config, manifest);
      break;
    case ExperimentId::identities:
      detail::run_identities(config, manifest);
      break;
  }
  manifest.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  manifest.write(config.output_dir / "manifest.json");
  return manifest;
}

}  // namespace alive::experiments
