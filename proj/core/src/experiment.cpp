#include "macgan/experiment.hpp"

#include <fstream>

#include "macgan/checkpoint.hpp"
#include "macgan/csv.hpp"
#include "macgan/svg.hpp"

namespace macgan {

void write_samples_csv(const std::filesystem::path& path, const Matrix& samples,
                       const CoverageReport& coverage) {
  static const char* kAxes[] = {"x", "y", "z"};
  std::vector<std::string> header;
  for (std::size_t r = 0; r < samples.rows(); ++r) {
    header.push_back(r < 3 ? kAxes[r] : "x" + std::to_string(r));
  }
  header.push_back("nearest_mode");
  CsvWriter csv(path, header);
  for (std::size_t i = 0; i < samples.cols(); ++i) {
    for (std::size_t r = 0; r < samples.rows(); ++r) csv.field(samples(r, i));
    csv.field(coverage.nearest_mode.at(i));
    csv.end_row();
  }
}

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  const fs::path& dir = config.output_dir;
  fs::create_directories(dir);
  {
    std::ofstream echo(dir / "effective_config.toml");
    if (!echo) throw InputError("cannot write into " + dir.string());
    echo << render_experiment_config(config);
  }

  const SyntheticDataset ds(config.dataset);
  ExperimentOutcome outcome;
  TrainResult result;
  try {
    result = train(config.gan, ds);
  } catch (const TrainingAborted& e) {
    write_training_log(dir / "training_log.csv", e.log());
    outcome.exit_code = kExitFailure;
    outcome.log = e.log();
    outcome.message = e.what();
    return outcome;
  }
  write_training_log(dir / "training_log.csv", result.log);

  const Matrix samples = evaluation_samples(result.generator, config.gan, ds.mode_count());
  const CoverageReport cov = mode_coverage(samples, ds, config.gan.coverage_threshold_sigma,
                                           config.gan.coverage_min_fraction);
  write_samples_csv(dir / "samples.csv", samples, cov);

  save_checkpoint(dir / "checkpoints" / "generator", result.generator);
  save_checkpoint(dir / "checkpoints" / "discriminator", result.discriminator);
  if (result.branch) save_checkpoint(dir / "checkpoints" / "branch", *result.branch);
  if (result.relation_net) save_checkpoint(dir / "checkpoints" / "relation", *result.relation_net);

  if (config.emit_plots) {
    // Reference draw from a stream of its own so plotting never touches training.
    Rng plot_rng = Rng(config.gan.seed).fork(0x9107);
    const LabeledPoints real = ds.sample(samples.cols(), plot_rng);
    write_scatter_svg(dir / "scatter.svg", real.points, samples, ds,
                      std::string(to_string(ds.kind())) + ", " +
                          std::to_string(cov.covered) + "/" + std::to_string(ds.mode_count()) +
                          " modes covered");
  }
  outcome.log = std::move(result.log);
  outcome.final_coverage = cov;
  return outcome;
}

}  // namespace macgan
