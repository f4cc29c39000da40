#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace macgan {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string measured;
  std::string threshold;
  // Reported but never failing: variants and ablations outside the criteria.
  bool informational = false;
};

struct SuiteOptions {
  std::size_t seeds = 5;
  std::filesystem::path out_dir = "mac-gan-suite";
  std::filesystem::path preset_dir;  // empty: default_preset_dir()
  std::size_t threads = 0;           // 0: default_thread_count()
  std::ostream* progress = nullptr;
};

/// Suites accepted by run_suite: gradients, taylor, toy-vortex, toy-gaussians,
/// ablations, relation, spectrum, all.
const std::vector<std::string>& suite_names();
bool is_known_suite(const std::string& name);

/// Runs a suite and returns one entry per criterion checked. Throws
/// InputError for an unknown name.
std::vector<CriterionResult> run_suite(const std::string& name, const SuiteOptions& options);

void print_results(std::ostream& out, const std::vector<CriterionResult>& results);
void write_suite_summary(const std::filesystem::path& path,
                         const std::vector<CriterionResult>& results);

/// MAC_GAN_PRESETS if set, else the directory configured at build time.
std::filesystem::path default_preset_dir();
/// hardware_concurrency(), capped by MAC_GAN_THREADS when set.
std::size_t default_thread_count();

// Individual checks; each returns the results for its criteria.
std::vector<CriterionResult> check_taylor();
std::vector<CriterionResult> check_gradients();
std::vector<CriterionResult> check_relation_prior();
std::vector<CriterionResult> check_ablation_identity(std::size_t iterations = 1000);
std::vector<CriterionResult> check_spectrum_oracle(const std::filesystem::path& work_dir);
std::vector<CriterionResult> check_toy_gaussians(const SuiteOptions& options);
std::vector<CriterionResult> check_toy_vortex(const SuiteOptions& options);
/// Non-saturating counterparts of the eight-Gaussian runs (informational).
std::vector<CriterionResult> check_loss_variants(const SuiteOptions& options);
/// Relation modes, representation layers, tau and the sign flip, one seed
/// each (informational).
std::vector<CriterionResult> check_relation_modes(const SuiteOptions& options);
CriterionResult headline_scope_note();

}  // namespace macgan
