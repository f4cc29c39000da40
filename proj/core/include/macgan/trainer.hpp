#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "macgan/coverage.hpp"
#include "macgan/dataset.hpp"
#include "macgan/losses.hpp"
#include "macgan/mlp.hpp"
#include "macgan/optimizer.hpp"
#include "macgan/relation.hpp"

namespace macgan {

enum class RelationMode { Supervised, SelfSupervised, Learnable };

/// Trace: the trace-form alignment measure. LogDet: the coding-rate
/// (log-det) decomposition with the same relation structure, evaluated with
/// per-class memberships.
enum class MeasureForm { Trace, LogDet };

enum class PriorEncoderKind { Identity, RandomProjection };

std::string_view to_string(RelationMode m);
RelationMode relation_mode_from_string(std::string_view name);
std::string_view to_string(MeasureForm f);
MeasureForm measure_form_from_string(std::string_view name);
std::string_view to_string(PriorEncoderKind k);
PriorEncoderKind prior_encoder_from_string(std::string_view name);

struct GanConfig {
  double lambda = 1.0;
  double gamma = 1.0;
  double beta = 1.0;
  double tau = 1.0;
  LossVariant loss_variant = LossVariant::WassersteinClip;
  RelationMode relation_mode = RelationMode::Supervised;
  MeasureForm measure_form = MeasureForm::Trace;
  double rate_epsilon = 0.5;
  std::size_t batch_size = 256;
  std::size_t iterations = 10000;
  std::size_t d_steps_per_g = 1;
  std::uint64_t seed = 0;

  double clip_limit = 0.05;
  bool mac_sign_flip = false;
  KernelSign kernel_sign = KernelSign::Negative;
  bool relation_grad_into_features = false;
  PriorEncoderKind prior_encoder = PriorEncoderKind::Identity;
  std::size_t prior_projection_dim = 8;

  // Architecture.
  std::size_t latent_dim = 8;
  std::vector<std::size_t> generator_hidden{128, 128, 128};
  std::vector<std::size_t> discriminator_hidden{128, 128, 128};
  /// Discriminator layer feeding the measures. Unset: the second hidden layer
  /// for unsupervised modes, the last hidden layer (input of the branch head)
  /// for Supervised.
  std::optional<std::size_t> representation_layer;
  std::size_t branch_dim = 32;
  std::size_t relation_hidden = 32;

  AdamConfig generator_optimizer{};
  AdamConfig discriminator_optimizer{};
  AdamConfig relation_optimizer{};

  // Logging and evaluation.
  std::size_t log_interval = 100;
  std::size_t eval_samples = 2000;
  double coverage_threshold_sigma = 3.0;
  double coverage_min_fraction = 0.01;
  bool log_wall_time = false;

  bool conditional() const noexcept { return relation_mode == RelationMode::Supervised; }
  std::size_t resolved_representation_layer() const;
  /// Throws InputError naming the offending field.
  void validate() const;
};

struct LogRecord {
  std::size_t iteration = 0;
  double d_loss = 0.0;
  double g_loss = 0.0;
  double l_mac = 0.0;
  double l_con = 0.0;
  std::size_t modes_covered = 0;
  double hq_fraction = 0.0;
  double elapsed_ms = 0.0;
};

class TrainingLog {
 public:
  /// Iteration stamps must be strictly increasing.
  void append(const LogRecord& r);
  const std::vector<LogRecord>& records() const noexcept { return records_; }
  bool empty() const noexcept { return records_.empty(); }
  const LogRecord& back() const { return records_.back(); }

 private:
  std::vector<LogRecord> records_;
};

inline constexpr const char* kTrainingLogHeader[] = {
    "iteration", "d_loss", "g_loss", "l_mac", "l_con", "modes_covered", "hq_fraction",
    "elapsed_ms"};

void write_training_log(const std::filesystem::path& path, const TrainingLog& log);

/// Per-iteration values handed to an observer (last discriminator step and
/// the generator step of that iteration).
struct IterationStats {
  std::size_t iteration = 0;
  double d_loss = 0.0;
  double g_loss = 0.0;
  double l_mac = 0.0;
  double l_con = 0.0;
  // Networks after this iteration's updates.
  const MlpNetwork* generator = nullptr;
  const MlpNetwork* discriminator = nullptr;
};
using IterationObserver = std::function<void(const IterationStats&)>;

struct TrainResult {
  MlpNetwork generator;
  MlpNetwork discriminator;
  std::optional<MlpNetwork> branch;        // Supervised representation head
  std::optional<MlpNetwork> relation_net;  // Learnable relation network F
  TrainingLog log;
};

/// Thrown when a loss or gradient turns non-finite; carries the log up to the
/// failing iteration.
class TrainingAborted : public NumericalError {
 public:
  TrainingAborted(const std::string& what, TrainingLog log, std::size_t iteration)
      : NumericalError(what), log_(std::move(log)), iteration_(iteration) {}
  const TrainingLog& log() const noexcept { return log_; }
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  TrainingLog log_;
  std::size_t iteration_;
};

/// Adversarial training with the alignment regularizer.
TrainResult train(const GanConfig& config, const SyntheticDataset& ds,
                  const IterationObserver& observer = {});

/// Reference loop without any regularizer code path. Consumes the random
/// streams exactly like train() so that train() with lambda = gamma = beta = 0
/// reproduces it bit for bit.
TrainResult train_baseline(const GanConfig& config, const SyntheticDataset& ds,
                           const IterationObserver& observer = {});

/// Generator input [latent ; one-hot label] for conditional models, latent
/// alone otherwise.
Matrix generator_input(const Matrix& latents, std::span<const int> labels, std::size_t classes,
                       bool conditional);

/// Draws n samples from a trained generator. Conditional models cycle labels
/// 0, 1, ..., classes - 1; `labels` receives them when non-null.
Matrix sample_generator(const MlpNetwork& generator, const GanConfig& config,
                        std::size_t classes, std::size_t n, Rng& rng,
                        std::vector<int>* labels = nullptr);

/// Fixed evaluation draw used by the training log: eval_samples points from
/// the generator with a latent stream derived from the seed.
Matrix evaluation_samples(const MlpNetwork& generator, const GanConfig& config,
                          std::size_t classes, std::vector<int>* labels = nullptr);

}  // namespace macgan
