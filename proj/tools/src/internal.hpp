#pragma once

#include <filesystem>
#include <string>

#include "alive/experiments/config.hpp"
#include "alive/experiments/csv.hpp"
#include "alive/experiments/experiments.hpp"

namespace alive::experiments::detail {

void run_lg_family(const ExperimentConfig& config, ArtifactManifest& manifest);
void run_pmmh_sv(const ExperimentConfig& config, ArtifactManifest& manifest);
void run_pmmh_lg_validation(const ExperimentConfig& config, ArtifactManifest& manifest);
void run_identities(const ExperimentConfig& config, ArtifactManifest& manifest);

/// Metadata line shared by every file of a run.
void stamp(CsvTable& table, const ExperimentConfig& config, const std::string& hash);

/// Writes `table` under the output directory and records it in the manifest.
void emit(const CsvTable& table, const std::string& name, const ExperimentConfig& config,
          ArtifactManifest& manifest);

}  // namespace alive::experiments::detail
