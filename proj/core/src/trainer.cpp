#include "macgan/trainer.hpp"

#include <chrono>
#include <optional>
#include <span>
#include <cmath>
#include <string>

#include "macgan/csv.hpp"
#include "macgan/measures.hpp"

namespace macgan {
namespace {

// Independent random streams forked from the run seed.
enum Stream : std::uint64_t {
  kInitGenerator = 1,
  kInitDiscriminator = 2,
  kInitBranch = 3,
  kInitRelation = 4,
  kData = 5,
  kLatent = 6,
  kEval = 7,
  kPrior = 8,
};

struct LatentDraw {
  Matrix z;
  std::vector<int> labels;
};

LatentDraw draw_latents(Rng& rng, const GanConfig& cfg, std::size_t n, std::size_t classes) {
  LatentDraw draw{random_normal(cfg.latent_dim, n, rng), {}};
  if (cfg.conditional()) {
    draw.labels.resize(n);
    for (int& l : draw.labels) l = static_cast<int>(rng.below(classes));
  }
  return draw;
}

MlpNetwork build_generator(const GanConfig& cfg, std::size_t classes, std::size_t out_dim,
                           Rng& rng) {
  std::vector<std::size_t> widths{cfg.latent_dim + (cfg.conditional() ? classes : 0)};
  widths.insert(widths.end(), cfg.generator_hidden.begin(), cfg.generator_hidden.end());
  widths.push_back(out_dim);
  return MlpNetwork::build(widths, Activation::ReLU, Activation::Identity, rng);
}

MlpNetwork build_discriminator(const GanConfig& cfg, std::size_t in_dim, Rng& rng) {
  std::vector<std::size_t> widths{in_dim};
  widths.insert(widths.end(), cfg.discriminator_hidden.begin(), cfg.discriminator_hidden.end());
  widths.push_back(1);
  return MlpNetwork::build(widths, Activation::LeakyReLU, Activation::Identity, rng);
}

bool is_log_iteration(const GanConfig& cfg, std::size_t it) {
  return it % cfg.log_interval == 0 || it == cfg.iterations;
}

double elapsed_ms(const GanConfig& cfg, std::chrono::steady_clock::time_point start) {
  if (!cfg.log_wall_time) return 0.0;
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

Matrix seed_row(std::span<const double> real, std::span<const double> fake) {
  Matrix m(1, real.size() + fake.size());
  for (std::size_t i = 0; i < real.size(); ++i) m(0, i) = real[i];
  for (std::size_t i = 0; i < fake.size(); ++i) m(0, real.size() + i) = fake[i];
  return m;
}

std::vector<int> concat(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Regularizer evaluation on the joint representation [Z | Z'].
struct MacTerms {
  double value = 0.0;
  Matrix grad_joint;  // d x (n + n')
  RelationMatrix c_joint;
};

class MacEvaluator {
 public:
  MacEvaluator(const GanConfig& cfg, MlpNetwork* relation_net)
      : cfg_(cfg), relation_net_(relation_net) {}

  MacTerms evaluate(const Matrix& z_joint, std::size_t n_real, const std::vector<int>& labels_real,
                    const std::vector<int>& labels_gen) const {
    const std::size_t n_gen = z_joint.cols() - n_real;
    const Matrix z_real = z_joint.col_block(0, n_real);
    const Matrix z_gen = z_joint.col_block(n_real, n_gen);
    MacTerms out;
    MacResult r;
    if (cfg_.measure_form == MeasureForm::LogDet) {
      Matrix rows_real, rows_gen, rows_joint;
      if (cfg_.relation_mode == RelationMode::Supervised) {
        rows_real = membership_rows_from_labels(labels_real);
        rows_gen = membership_rows_from_labels(labels_gen);
        rows_joint = membership_rows_from_labels(concat(labels_real, labels_gen));
      } else {
        rows_real = singleton_membership_rows(n_real);
        rows_gen = singleton_membership_rows(n_gen);
        rows_joint = singleton_membership_rows(n_real + n_gen);
      }
      r = l_mac_logdet(z_real, z_gen, rows_real, rows_gen, rows_joint, cfg_.rate_epsilon);
    } else {
      RelationMatrix c, c_gen;
      switch (cfg_.relation_mode) {
        case RelationMode::Supervised:
          c = supervised_relation(labels_real);
          c_gen = supervised_relation(labels_gen);
          out.c_joint = supervised_relation(concat(labels_real, labels_gen));
          break;
        case RelationMode::SelfSupervised:
          c = identity_relation(n_real);
          c_gen = identity_relation(n_gen);
          out.c_joint = identity_relation(n_real + n_gen);
          break;
        case RelationMode::Learnable:
          out.c_joint = relation_forward(*relation_net_, FeatureBatch(z_joint));
          c = RelationMatrix{out.c_joint.data.block(0, n_real, 0, n_real), RelationKind::Learned};
          c_gen = RelationMatrix{out.c_joint.data.block(n_real, n_gen, n_real, n_gen),
                                 RelationKind::Learned};
          break;
      }
      r = l_mac_grads(FeatureBatch(z_real, SampleSource::Real),
                      FeatureBatch(z_gen, SampleSource::Generated), c, c_gen, out.c_joint);
    }
    out.value = r.value;
    out.grad_joint = hcat(r.grad_real, r.grad_gen);
    return out;
  }

 private:
  const GanConfig& cfg_;
  MlpNetwork* relation_net_;
};

void require_finite(double v, const char* what, std::size_t it, const TrainingLog& log) {
  if (!std::isfinite(v)) {
    throw TrainingAborted(std::string(what) + " became non-finite at iteration " +
                              std::to_string(it),
                          log, it);
  }
}

void require_finite(const Gradients& g, const char* what, std::size_t it,
                    const TrainingLog& log) {
  if (!g.all_finite()) {
    throw TrainingAborted(std::string(what) + " gradients became non-finite at iteration " +
                              std::to_string(it),
                          log, it);
  }
}

// Runs body(it) for every iteration; numerical failures inside the step
// (overflowing products, non-finite prior rows) abort with the log so far.
template <class Body>
void run_iterations(const GanConfig& cfg, const TrainingLog& log, Body&& body) {
  for (std::size_t it = 1; it <= cfg.iterations; ++it) {
    try {
      body(it);
    } catch (const TrainingAborted&) {
      throw;
    } catch (const NumericalError& e) {
      throw TrainingAborted(std::string(e.what()) + " at iteration " + std::to_string(it), log,
                            it);
    }
  }
}

LogRecord evaluate_record(const MlpNetwork& generator, const GanConfig& cfg,
                          const SyntheticDataset& ds, const IterationStats& stats,
                          std::chrono::steady_clock::time_point start) {
  const Matrix samples = evaluation_samples(generator, cfg, ds.mode_count());
  LogRecord rec;
  rec.iteration = stats.iteration;
  rec.d_loss = stats.d_loss;
  rec.g_loss = stats.g_loss;
  rec.l_mac = stats.l_mac;
  rec.l_con = stats.l_con;
  if (samples.all_finite()) {
    const CoverageReport cov = mode_coverage(samples, ds, cfg.coverage_threshold_sigma,
                                             cfg.coverage_min_fraction);
    rec.modes_covered = cov.covered;
    rec.hq_fraction = cov.high_quality_fraction;
  }
  rec.elapsed_ms = elapsed_ms(cfg, start);
  return rec;
}

}  // namespace

std::string_view to_string(RelationMode m) {
  switch (m) {
    case RelationMode::Supervised: return "supervised";
    case RelationMode::SelfSupervised: return "self_supervised";
    case RelationMode::Learnable: return "learnable";
  }
  return "supervised";
}

RelationMode relation_mode_from_string(std::string_view name) {
  for (RelationMode m :
       {RelationMode::Supervised, RelationMode::SelfSupervised, RelationMode::Learnable}) {
    if (to_string(m) == name) return m;
  }
  throw InputError("unknown relation mode '" + std::string(name) + "'");
}

std::string_view to_string(MeasureForm f) { return f == MeasureForm::Trace ? "trace" : "logdet"; }

MeasureForm measure_form_from_string(std::string_view name) {
  if (name == "trace") return MeasureForm::Trace;
  if (name == "logdet") return MeasureForm::LogDet;
  throw InputError("unknown measure form '" + std::string(name) + "'");
}

std::string_view to_string(PriorEncoderKind k) {
  return k == PriorEncoderKind::Identity ? "identity" : "random_projection";
}

PriorEncoderKind prior_encoder_from_string(std::string_view name) {
  if (name == "identity") return PriorEncoderKind::Identity;
  if (name == "random_projection") return PriorEncoderKind::RandomProjection;
  throw InputError("unknown prior encoder '" + std::string(name) + "'");
}

std::size_t GanConfig::resolved_representation_layer() const {
  if (representation_layer) return *representation_layer;
  if (relation_mode == RelationMode::Supervised) return discriminator_hidden.size() - 1;
  return discriminator_hidden.size() >= 2 ? 1 : 0;
}

void GanConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& why) {
    throw InputError(key + ": " + why);
  };
  if (!(lambda >= 0.0)) fail("lambda", "must be >= 0");
  if (!(gamma >= 0.0)) fail("gamma", "must be >= 0");
  if (!(beta >= 0.0)) fail("beta", "must be >= 0");
  if (!(tau > 0.0)) fail("tau", "must be > 0");
  if (!(rate_epsilon > 0.0)) fail("rate_epsilon", "must be > 0");
  if (batch_size < 2) fail("batch_size", "must be >= 2");
  if (iterations < 1) fail("iterations", "must be >= 1");
  if (d_steps_per_g < 1) fail("d_steps_per_g", "must be >= 1");
  if (!(clip_limit > 0.0)) fail("clip_limit", "must be > 0");
  if (latent_dim < 1) fail("latent_dim", "must be >= 1");
  if (discriminator_hidden.empty()) fail("discriminator_hidden", "needs at least one layer");
  if (generator_hidden.empty()) fail("generator_hidden", "needs at least one layer");
  if (resolved_representation_layer() >= discriminator_hidden.size()) {
    fail("representation_layer", "must index a hidden layer of the discriminator");
  }
  if (branch_dim < 1) fail("branch_dim", "must be >= 1");
  if (relation_hidden < 1) fail("relation_hidden", "must be >= 1");
  if (log_interval < 1) fail("log_interval", "must be >= 1");
  if (eval_samples < 1) fail("eval_samples", "must be >= 1");
  if (measure_form == MeasureForm::LogDet && relation_mode == RelationMode::Learnable) {
    fail("measure_form", "logdet needs class memberships; use supervised or self_supervised");
  }
  for (const AdamConfig* a : {&generator_optimizer, &discriminator_optimizer, &relation_optimizer}) {
    if (!(a->learning_rate > 0.0)) fail("learning_rate", "must be > 0");
    if (!(a->beta1 >= 0.0 && a->beta1 < 1.0)) fail("beta1", "must lie in [0, 1)");
    if (!(a->beta2 >= 0.0 && a->beta2 < 1.0)) fail("beta2", "must lie in [0, 1)");
  }
}

void TrainingLog::append(const LogRecord& r) {
  if (!records_.empty() && r.iteration <= records_.back().iteration) {
    throw InputError("TrainingLog: iteration stamps must be strictly increasing");
  }
  records_.push_back(r);
}

void write_training_log(const std::filesystem::path& path, const TrainingLog& log) {
  CsvWriter csv(path, std::vector<std::string>(std::begin(kTrainingLogHeader),
                                               std::end(kTrainingLogHeader)));
  for (const LogRecord& r : log.records()) {
    csv.field(r.iteration)
        .field(r.d_loss)
        .field(r.g_loss)
        .field(r.l_mac)
        .field(r.l_con)
        .field(r.modes_covered)
        .field(r.hq_fraction)
        .field(r.elapsed_ms)
        .end_row();
  }
}

Matrix generator_input(const Matrix& latents, std::span<const int> labels, std::size_t classes,
                       bool conditional) {
  if (!conditional) return latents;
  if (labels.size() != latents.cols()) {
    throw DimensionError("generator_input: one label per latent column required");
  }
  Matrix onehot(classes, latents.cols());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= classes) {
      throw InputError("generator_input: label out of range");
    }
    onehot(static_cast<std::size_t>(labels[i]), i) = 1.0;
  }
  return vcat(latents, onehot);
}

Matrix sample_generator(const MlpNetwork& generator, const GanConfig& config,
                        std::size_t classes, std::size_t n, Rng& rng, std::vector<int>* labels) {
  const Matrix z = random_normal(config.latent_dim, n, rng);
  std::vector<int> cycled;
  if (config.conditional()) {
    cycled.resize(n);
    for (std::size_t i = 0; i < n; ++i) cycled[i] = static_cast<int>(i % classes);
  }
  if (labels) *labels = cycled;
  return generator.predict(generator_input(z, cycled, classes, config.conditional()));
}

Matrix evaluation_samples(const MlpNetwork& generator, const GanConfig& config,
                          std::size_t classes, std::vector<int>* labels) {
  Rng rng = Rng(config.seed).fork(kEval);
  return sample_generator(generator, config, classes, config.eval_samples, rng, labels);
}

TrainResult train(const GanConfig& cfg, const SyntheticDataset& ds,
                  const IterationObserver& observer) {
  cfg.validate();
  const Rng root(cfg.seed);
  Rng init_g = root.fork(kInitGenerator);
  Rng init_d = root.fork(kInitDiscriminator);
  Rng data_rng = root.fork(kData);
  Rng latent_rng = root.fork(kLatent);

  const std::size_t classes = ds.mode_count();
  const std::size_t n = cfg.batch_size;
  const std::size_t rep = cfg.resolved_representation_layer();
  const bool supervised = cfg.relation_mode == RelationMode::Supervised;
  const bool learnable = cfg.relation_mode == RelationMode::Learnable;

  TrainResult result;
  result.generator = build_generator(cfg, classes, ds.dim(), init_g);
  result.discriminator = build_discriminator(cfg, ds.dim(), init_d);
  MlpNetwork& gen = result.generator;
  MlpNetwork& disc = result.discriminator;
  if (supervised) {
    Rng init_b = root.fork(kInitBranch);
    const std::size_t widths[] = {cfg.discriminator_hidden[rep], cfg.branch_dim};
    result.branch = MlpNetwork::build(widths, Activation::Identity, Activation::Identity, init_b);
  }
  if (learnable) {
    Rng init_f = root.fork(kInitRelation);
    result.relation_net =
        build_relation_net(cfg.discriminator_hidden[rep], cfg.relation_hidden, init_f);
  }
  MlpNetwork* branch = result.branch ? &*result.branch : nullptr;
  MlpNetwork* relation_net = result.relation_net ? &*result.relation_net : nullptr;

  Adam gen_opt(cfg.generator_optimizer, gen);
  Adam disc_opt(cfg.discriminator_optimizer, disc);
  std::optional<Adam> branch_opt;
  if (branch) branch_opt.emplace(cfg.discriminator_optimizer, *branch);
  std::optional<Adam> relation_opt;
  if (relation_net) relation_opt.emplace(cfg.relation_optimizer, *relation_net);

  const PriorEncoder encoder =
      cfg.prior_encoder == PriorEncoderKind::Identity
          ? PriorEncoder::identity()
          : PriorEncoder::random_projection(ds.dim(), cfg.prior_projection_dim,
                                            root.fork(kPrior).next_u64());
  const MacEvaluator mac_eval(cfg, relation_net);

  auto representation = [&](void) -> Matrix {
    const Matrix& h = disc.layer_output(rep);
    return branch ? branch->forward(h) : h;
  };
  // Routes dL/dZ~ to the discriminator trunk, through the branch head if any.
  auto seed_representation = [&](const Matrix& grad_z, bool param_grads,
                                  std::vector<GradientSeed>& seeds) -> std::optional<Gradients> {
    if (branch) {
      Gradients bg = branch->backward(grad_z, param_grads);
      seeds.push_back({rep, bg.input});
      return bg;
    }
    seeds.push_back({rep, grad_z});
    return std::nullopt;
  };

  const auto start = std::chrono::steady_clock::now();
  const std::size_t last = disc.layer_count() - 1;
  LabeledPoints real;

  run_iterations(cfg, result.log, [&](std::size_t it) {
    const bool log_now = is_log_iteration(cfg, it);
    IterationStats stats;
    stats.iteration = it;

    // Discriminator (and relation network) updates.
    for (std::size_t step = 0; step < cfg.d_steps_per_g; ++step) {
      real = ds.sample(n, data_rng);
      const LatentDraw lat = draw_latents(latent_rng, cfg, n, classes);
      const Matrix fake =
          gen.predict(generator_input(lat.z, lat.labels, classes, cfg.conditional()));
      const Matrix joint = hcat(real.points, fake);
      const Matrix scores = disc.forward(joint);
      const std::span<const double> real_out(scores.data(), n);
      const std::span<const double> fake_out(scores.data() + n, n);
      const CriticGradients cg = discriminator_loss_grad(real_out, fake_out, cfg.loss_variant);

      std::vector<GradientSeed> seeds{{last, seed_row(cg.real, cg.fake)}};
      double mac = 0.0;
      double l_con = 0.0;
      std::optional<Gradients> branch_grads;
      std::optional<Gradients> relation_grads;
      const bool relation_step = learnable && cfg.beta != 0.0;
      if (cfg.lambda != 0.0 || relation_step || log_now) {
        const MacTerms terms = mac_eval.evaluate(representation(), n, real.labels, lat.labels);
        mac = terms.value;
        if (cfg.lambda != 0.0) {
          Matrix grad_z = terms.grad_joint;
          grad_z *= cfg.mac_sign_flip ? cfg.lambda : -cfg.lambda;
          branch_grads = seed_representation(grad_z, true, seeds);
        }
        if (relation_step) {
          const PriorRelation prior =
              prior_relation(FeatureBatch(encoder.encode(joint)), cfg.tau, cfg.kernel_sign);
          const RelationLossResult rl = relation_loss(terms.c_joint, prior, cfg.beta);
          l_con = rl.value;
          Matrix grad_feat;
          relation_grads = relation_backward(*relation_net, rl.grad,
                                             cfg.relation_grad_into_features ? &grad_feat : nullptr);
          if (cfg.relation_grad_into_features) seeds.push_back({rep, std::move(grad_feat)});
        }
      }

      const Gradients dg = disc.backward(seeds);
      stats.d_loss = discriminator_loss(real_out, fake_out, mac, cfg.lambda, cfg.loss_variant,
                                        cfg.mac_sign_flip);
      stats.l_mac = mac;
      stats.l_con = l_con;
      require_finite(stats.d_loss, "discriminator loss", it, result.log);
      require_finite(dg, "discriminator", it, result.log);
      disc_opt.step(disc, dg);
      if (branch_grads) {
        require_finite(*branch_grads, "branch head", it, result.log);
        branch_opt->step(*branch, *branch_grads);
      }
      if (relation_grads) {
        require_finite(l_con, "relation loss", it, result.log);
        require_finite(*relation_grads, "relation network", it, result.log);
        relation_opt->step(*relation_net, *relation_grads);
      }
      if (cfg.loss_variant == LossVariant::WassersteinClip) {
        clip_parameters(disc, cfg.clip_limit);
        if (branch) clip_parameters(*branch, cfg.clip_limit);
      }
    }

    // Generator update through the current discriminator.
    {
      const LatentDraw lat = draw_latents(latent_rng, cfg, n, classes);
      const Matrix fake =
          gen.forward(generator_input(lat.z, lat.labels, classes, cfg.conditional()));
      const Matrix joint = hcat(real.points, fake);
      const Matrix scores = disc.forward(joint);
      const std::span<const double> fake_out(scores.data() + n, n);
      const std::vector<double> gg = generator_loss_grad(fake_out, cfg.loss_variant);
      const std::vector<double> zeros(n, 0.0);

      std::vector<GradientSeed> seeds{{last, seed_row(zeros, gg)}};
      double mac = 0.0;
      if (cfg.gamma != 0.0) {
        const MacTerms terms = mac_eval.evaluate(representation(), n, real.labels, lat.labels);
        mac = terms.value;
        Matrix grad_z(terms.grad_joint.rows(), terms.grad_joint.cols());
        grad_z.set_block(0, n, terms.grad_joint.col_block(n, n) * cfg.gamma);
        seed_representation(grad_z, false, seeds);
      }
      const Gradients through = disc.backward(seeds, false);
      const Gradients gen_grads = gen.backward(through.input.col_block(n, n));
      stats.g_loss = generator_loss(fake_out, mac, cfg.gamma, cfg.loss_variant);
      require_finite(stats.g_loss, "generator loss", it, result.log);
      require_finite(gen_grads, "generator", it, result.log);
      gen_opt.step(gen, gen_grads);
    }

    if (observer) {
      stats.generator = &gen;
      stats.discriminator = &disc;
      observer(stats);
    }
    if (log_now) result.log.append(evaluate_record(gen, cfg, ds, stats, start));
  });
  return result;
}

TrainResult train_baseline(const GanConfig& cfg, const SyntheticDataset& ds,
                           const IterationObserver& observer) {
  cfg.validate();
  const Rng root(cfg.seed);
  Rng init_g = root.fork(kInitGenerator);
  Rng init_d = root.fork(kInitDiscriminator);
  Rng data_rng = root.fork(kData);
  Rng latent_rng = root.fork(kLatent);

  const std::size_t classes = ds.mode_count();
  const std::size_t n = cfg.batch_size;

  TrainResult result;
  result.generator = build_generator(cfg, classes, ds.dim(), init_g);
  result.discriminator = build_discriminator(cfg, ds.dim(), init_d);
  MlpNetwork& gen = result.generator;
  MlpNetwork& disc = result.discriminator;
  Adam gen_opt(cfg.generator_optimizer, gen);
  Adam disc_opt(cfg.discriminator_optimizer, disc);

  const auto start = std::chrono::steady_clock::now();
  LabeledPoints real;
  run_iterations(cfg, result.log, [&](std::size_t it) {
    IterationStats stats;
    stats.iteration = it;
    for (std::size_t step = 0; step < cfg.d_steps_per_g; ++step) {
      real = ds.sample(n, data_rng);
      const LatentDraw lat = draw_latents(latent_rng, cfg, n, classes);
      const Matrix fake =
          gen.predict(generator_input(lat.z, lat.labels, classes, cfg.conditional()));
      const Matrix scores = disc.forward(hcat(real.points, fake));
      const std::span<const double> real_out(scores.data(), n);
      const std::span<const double> fake_out(scores.data() + n, n);
      const CriticGradients cg = discriminator_loss_grad(real_out, fake_out, cfg.loss_variant);
      const Gradients dg = disc.backward(seed_row(cg.real, cg.fake));
      stats.d_loss = discriminator_loss(real_out, fake_out, 0.0, 0.0, cfg.loss_variant);
      require_finite(stats.d_loss, "discriminator loss", it, result.log);
      require_finite(dg, "discriminator", it, result.log);
      disc_opt.step(disc, dg);
      if (cfg.loss_variant == LossVariant::WassersteinClip) clip_parameters(disc, cfg.clip_limit);
    }
    {
      const LatentDraw lat = draw_latents(latent_rng, cfg, n, classes);
      const Matrix fake =
          gen.forward(generator_input(lat.z, lat.labels, classes, cfg.conditional()));
      const Matrix scores = disc.forward(hcat(real.points, fake));
      const std::span<const double> fake_out(scores.data() + n, n);
      const std::vector<double> gg = generator_loss_grad(fake_out, cfg.loss_variant);
      const Gradients through =
          disc.backward(seed_row(std::vector<double>(n, 0.0), gg), false);
      const Gradients gen_grads = gen.backward(through.input.col_block(n, n));
      stats.g_loss = generator_loss(fake_out, 0.0, 0.0, cfg.loss_variant);
      require_finite(stats.g_loss, "generator loss", it, result.log);
      require_finite(gen_grads, "generator", it, result.log);
      gen_opt.step(gen, gen_grads);
    }
    if (observer) {
      stats.generator = &gen;
      stats.discriminator = &disc;
      observer(stats);
    }
    if (is_log_iteration(cfg, it)) {
      result.log.append(evaluate_record(gen, cfg, ds, stats, start));
    }
  });
  return result;
}

}  // namespace macgan
