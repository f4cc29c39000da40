#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "macgan/analysis.hpp"
#include "macgan/experiment.hpp"
#include "macgan/harness.hpp"

namespace fs = std::filesystem;
using namespace macgan;

namespace {

int cmd_train(const std::string& config_path, const std::optional<std::string>& output_dir) {
  ExperimentConfig cfg;
  try {
    cfg = load_experiment_config(config_path);
  } catch (const InputError& e) {
    std::cerr << "mac-gan: invalid config: " << e.what() << '\n';
    return kExitUsage;
  }
  if (output_dir) cfg.output_dir = *output_dir;

  const auto start = std::chrono::steady_clock::now();
  const ExperimentOutcome out = run_experiment(cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (out.exit_code != kExitOk) {
    std::cerr << "mac-gan: training aborted: " << out.message << '\n';
    return out.exit_code;
  }
  const CoverageReport& cov = *out.final_coverage;
  std::cout << "modes covered: " << cov.covered << "\n"
            << "high-quality fraction: " << cov.high_quality_fraction << "\n"
            << "artifacts: " << cfg.output_dir.string() << "\n";
  std::cerr << "elapsed: " << secs << " s\n";
  return kExitOk;
}

int cmd_spectrum(const std::string& dir_a, const std::optional<std::string>& dir_b, bool center,
                 double energy_q, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const SpectrumReport a = spectrum(average_image(load_image_directory(dir_a)), energy_q, center);
  write_spectrum_csv(fs::path(out_dir) / "spectrum_a.csv", a);
  std::cout << dir_a << ": " << a.sigma.size() << " singular values, effective rank "
            << a.effective_rank << " at q=" << energy_q << "\n";
  if (dir_b) {
    const SpectrumReport b =
        spectrum(average_image(load_image_directory(*dir_b)), energy_q, center);
    write_spectrum_csv(fs::path(out_dir) / "spectrum_b.csv", b);
    std::cout << *dir_b << ": " << b.sigma.size() << " singular values, effective rank "
              << b.effective_rank << " at q=" << energy_q << "\n";
    const SpectrumComparison c = compare_spectra(a, b);
    write_comparison_csv(out_dir, c);
    std::cout << "index-wise larger: a " << c.a_larger << ", b " << c.b_larger << ", ties "
              << c.ties << "\n";
  }
  return kExitOk;
}

int cmd_suite(const std::string& name, std::size_t seeds, const std::string& out_dir,
              const std::optional<std::string>& presets) {
  SuiteOptions opt;
  opt.seeds = seeds;
  opt.out_dir = out_dir;
  if (presets) opt.preset_dir = *presets;
  opt.progress = &std::cerr;
  const auto results = run_suite(name, opt);
  print_results(std::cout, results);
  write_suite_summary(opt.out_dir / "summary.csv", results);
  for (const auto& r : results) {
    if (!r.passed && !r.informational) return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Manifold-alignment GAN experiments and singular-spectrum analysis"};
  app.require_subcommand(1);

  auto* train = app.add_subcommand("train", "Train a GAN from a config file");
  std::string config_path;
  std::optional<std::string> output_dir;
  train->add_option("config", config_path, "Experiment config (.toml)")->required();
  train->add_option("--output-dir", output_dir, "Override the config's output directory");

  auto* spec = app.add_subcommand("spectrum", "Singular spectrum of averaged grayscale images");
  std::string dir_a;
  std::optional<std::string> dir_b;
  bool center = false;
  double energy_q = 0.95;
  std::string spectrum_out = "spectrum-out";
  spec->add_option("dir", dir_a, "Directory of .pgm/.csv images")->required();
  spec->add_option("dir2", dir_b, "Second directory to compare against");
  spec->add_flag("--center", center, "Subtract the mean intensity before the SVD");
  spec->add_option("--energy-q", energy_q, "Energy fraction for the effective rank")
      ->check(CLI::Range(0.0, 1.0));
  spec->add_option("--out", spectrum_out, "Output directory for CSVs");

  auto* suite = app.add_subcommand("suite", "Run an acceptance bundle");
  std::string suite_name;
  std::size_t seeds = 5;
  std::string suite_out;
  std::optional<std::string> presets;
  suite->add_option("name", suite_name, "gradients | taylor | toy-vortex | toy-gaussians | "
                                        "ablations | relation | spectrum | all")
      ->required();
  suite->add_option("--seeds", seeds, "Seeds per toy experiment")->check(CLI::PositiveNumber);
  suite->add_option("--out", suite_out, "Output directory (default mac-gan-suite/<name>)");
  suite->add_option("--presets", presets, "Preset directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*train) return cmd_train(config_path, output_dir);
    if (*spec) {
      if (!(energy_q > 0.0)) {
        std::cerr << "mac-gan: --energy-q must lie in (0, 1]\n";
        return kExitUsage;
      }
      return cmd_spectrum(dir_a, dir_b, center, energy_q, spectrum_out);
    }
    if (*suite) {
      if (!is_known_suite(suite_name)) {
        std::cerr << "mac-gan: unknown suite '" << suite_name << "'\n" << suite->help();
        return kExitUsage;
      }
      if (suite_out.empty()) suite_out = (fs::path("mac-gan-suite") / suite_name).string();
      return cmd_suite(suite_name, seeds, suite_out, presets);
    }
  } catch (const InputError& e) {
    std::cerr << "mac-gan: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "mac-gan: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
