#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "macgan/config.hpp"

namespace macgan {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

struct ExperimentOutcome {
  int exit_code = kExitOk;
  TrainingLog log;
  std::optional<CoverageReport> final_coverage;  // absent when training aborted
  std::string message;                           // abort reason, if any
};

/// Trains per `config` and writes, inside config.output_dir only:
///   training_log.csv, samples.csv (final evaluation draw with nearest mode),
///   checkpoints/<net>/, effective_config.toml and, with emit_plots,
///   scatter.svg. A non-finite abort still writes the partial log and returns
///   kExitFailure.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

/// Writes an evaluation draw as CSV with columns x, y[, z], nearest_mode.
void write_samples_csv(const std::filesystem::path& path, const Matrix& samples,
                       const CoverageReport& coverage);

}  // namespace macgan
