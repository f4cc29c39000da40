#pragma once

#include <filesystem>
#include <string>

#include "macgan/dataset.hpp"
#include "macgan/trainer.hpp"

namespace macgan {

/// Everything a `train` run needs.
///
/// File format: `[section]` headers followed by `key = value` lines; values
/// are numbers, true/false, double-quoted strings or flat arrays of integers.
/// `#` starts a comment. Sections: run, dataset, gan, architecture, optimizer,
/// evaluation. Unknown sections or keys, duplicates and type mismatches are
/// InputErrors naming `section.key` and the line.
struct ExperimentConfig {
  GanConfig gan;
  DatasetSpec dataset;
  std::filesystem::path output_dir = "runs/default";
  bool emit_plots = true;
};

ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::string& source_name = "<config>");
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Renders every field, defaults included, in the format parse accepts;
/// parsing the result yields an identical configuration.
std::string render_experiment_config(const ExperimentConfig& config);

}  // namespace macgan
