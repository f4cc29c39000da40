#include "macgan/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "macgan/analysis.hpp"
#include "macgan/csv.hpp"
#include "macgan/decompositions.hpp"
#include "macgan/experiment.hpp"
#include "macgan/measures.hpp"

#ifndef MACGAN_DEFAULT_PRESET_DIR
#define MACGAN_DEFAULT_PRESET_DIR "presets"
#endif

namespace macgan {
namespace {

std::string show(double v) {
  std::ostringstream s;
  s << std::setprecision(4) << v;
  return s.str();
}

double norm(const Matrix& m) { return std::sqrt(frobenius_sq(m)); }

double relative_error(const Matrix& analytic, const Matrix& numeric) {
  Matrix diff = analytic;
  diff -= numeric;
  return norm(diff) / std::max({norm(analytic), norm(numeric), 1e-8});
}

// Central differences of f() with respect to every entry of x (perturbed in place).
template <class F>
Matrix numeric_gradient(Matrix& x, F&& f, double h = 1e-5) {
  Matrix g(x.rows(), x.cols());
  auto xs = x.values();
  auto gs = g.values();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double saved = xs[i];
    xs[i] = saved + h;
    const double up = f();
    xs[i] = saved - h;
    const double down = f();
    xs[i] = saved;
    gs[i] = (up - down) / (2.0 * h);
  }
  return g;
}

// Gradient error over all weights and biases of a network.
template <class F>
double network_error(MlpNetwork& net, const Gradients& analytic, F&& f) {
  double worst = 0.0;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    Matrix& w = net.mutable_layers()[l].weight;
    worst = std::max(worst, relative_error(analytic.weight[l], numeric_gradient(w, f)));
    Matrix& b = net.mutable_layers()[l].bias;
    worst = std::max(worst, relative_error(analytic.bias[l], numeric_gradient(b, f)));
  }
  return worst;
}

Matrix random_nonnegative(std::size_t rows, std::size_t cols, Rng& rng) {
  return random_uniform(rows, cols, rng, 0.0, 1.0);
}

std::size_t between(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

std::vector<int> random_labels(std::size_t n, std::size_t classes, Rng& rng) {
  std::vector<int> l(n);
  for (int& v : l) v = static_cast<int>(rng.below(classes));
  return l;
}

// Orthonormal columns by Gram-Schmidt applied twice.
Matrix orthonormal_columns(std::size_t m, std::size_t k, Rng& rng) {
  Matrix q = random_normal(m, k, rng);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t p = 0; p < j; ++p) {
        double dot = 0.0;
        for (std::size_t r = 0; r < m; ++r) dot += q(r, p) * q(r, j);
        for (std::size_t r = 0; r < m; ++r) q(r, j) -= dot * q(r, p);
      }
      double nrm = 0.0;
      for (std::size_t r = 0; r < m; ++r) nrm += q(r, j) * q(r, j);
      nrm = std::sqrt(nrm);
      for (std::size_t r = 0; r < m; ++r) q(r, j) /= nrm;
    }
  }
  return q;
}

// Non-negative image sum_k sigma_k u_k v_k^T whose factors have disjoint
// supports on randomly permuted row/column blocks, so sigma is known exactly.
Matrix block_rank_image(std::size_t rows, std::size_t cols, const std::vector<double>& sigma,
                        Rng& rng) {
  const std::size_t k = sigma.size();
  auto blocks = [&](std::size_t len) {
    std::vector<std::size_t> perm(len);
    for (std::size_t i = 0; i < len; ++i) perm[i] = i;
    for (std::size_t i = len; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    std::vector<std::vector<std::size_t>> out(k);
    for (std::size_t i = 0; i < len; ++i) out[i * k / len].push_back(perm[i]);
    return out;
  };
  const auto rb = blocks(rows);
  const auto cb = blocks(cols);
  Matrix img(rows, cols);
  for (std::size_t j = 0; j < k; ++j) {
    const double v = sigma[j] / std::sqrt(static_cast<double>(rb[j].size() * cb[j].size()));
    for (std::size_t r : rb[j]) {
      for (std::size_t c : cb[j]) img(r, c) = v;
    }
  }
  return img;
}

template <class F>
void parallel_for(std::size_t count, std::size_t threads, F&& body) {
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(threads, count));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct RunSummary {
  std::string preset;
  std::uint64_t seed = 0;
  int exit_code = 0;
  std::size_t covered = 0;
  double hq = 0.0;
};

struct RunJob {
  std::string label;
  ExperimentConfig config;
};

std::filesystem::path preset_dir_of(const SuiteOptions& opt) {
  return opt.preset_dir.empty() ? default_preset_dir() : opt.preset_dir;
}

// `seeds` consecutive seeds starting at the preset's own, one directory each.
void add_jobs(std::vector<RunJob>& jobs, const std::string& label, const ExperimentConfig& base,
              std::size_t seeds, const SuiteOptions& opt) {
  for (std::size_t k = 0; k < seeds; ++k) {
    ExperimentConfig cfg = base;
    cfg.gan.seed = base.gan.seed + k;
    cfg.output_dir = opt.out_dir / "runs" / (label + "-seed" + std::to_string(cfg.gan.seed));
    jobs.push_back({label, cfg});
  }
}

std::vector<RunSummary> run_jobs(const std::vector<RunJob>& jobs, const SuiteOptions& opt) {
  std::vector<RunSummary> runs;
  for (const RunJob& j : jobs) runs.push_back(RunSummary{j.label, j.config.gan.seed, 0, 0, 0.0});
  std::mutex io;
  const std::size_t threads = opt.threads ? opt.threads : default_thread_count();
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    const ExperimentOutcome out = run_experiment(jobs[i].config);
    runs[i].exit_code = out.exit_code;
    if (out.final_coverage) {
      runs[i].covered = out.final_coverage->covered;
      runs[i].hq = out.final_coverage->high_quality_fraction;
    }
    if (opt.progress) {
      std::lock_guard lock(io);
      *opt.progress << "  " << runs[i].preset << " seed " << runs[i].seed << ": "
                    << runs[i].covered << " modes, hq " << show(runs[i].hq)
                    << (out.exit_code ? " (aborted: " + out.message + ")" : "") << std::endl;
    }
  });
  std::filesystem::create_directories(opt.out_dir);
  return runs;
}

std::vector<RunSummary> run_presets(const std::vector<std::string>& presets,
                                    const SuiteOptions& opt, std::size_t seeds) {
  std::vector<RunJob> jobs;
  for (const std::string& name : presets) {
    add_jobs(jobs, name, load_experiment_config(preset_dir_of(opt) / (name + ".toml")), seeds, opt);
  }
  return run_jobs(jobs, opt);
}

void write_runs_csv(const std::filesystem::path& path, const std::vector<RunSummary>& runs) {
  CsvWriter csv(path, {"preset", "seed", "exit_code", "modes_covered", "hq_fraction"});
  for (const RunSummary& r : runs) {
    csv.field(r.preset).field(static_cast<long long>(r.seed)).field(r.exit_code);
    csv.field(r.covered).field(r.hq).end_row();
  }
}

std::vector<RunSummary> select(const std::vector<RunSummary>& runs, const std::string& preset) {
  std::vector<RunSummary> out;
  for (const RunSummary& r : runs) {
    if (r.preset == preset) out.push_back(r);
  }
  return out;
}

std::string coverage_list(const std::vector<RunSummary>& runs) {
  std::string s = "[";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    s += (i ? " " : "") + std::to_string(runs[i].covered);
  }
  return s + "]";
}

// Required number of seeds out of `total` for a k-of-5 rule.
std::size_t required(std::size_t k_of_5, std::size_t total) {
  return (k_of_5 * total + 4) / 5;
}

std::uint64_t digest(const MlpNetwork& net) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](const Matrix& m) {
    for (double v : m.values()) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      h = (h ^ bits) * 1099511628211ull;
    }
  };
  for (const Layer& l : net.layers()) {
    mix(l.weight);
    mix(l.bias);
  }
  return h;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"gradients", "taylor",   "toy-vortex", "toy-gaussians",
                                              "ablations", "relation", "spectrum",   "all"};
  return names;
}

bool is_known_suite(const std::string& name) {
  const auto& n = suite_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

std::filesystem::path default_preset_dir() {
  if (const char* env = std::getenv("MAC_GAN_PRESETS"); env && *env) return env;
  return MACGAN_DEFAULT_PRESET_DIR;
}

std::size_t default_thread_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MAC_GAN_THREADS"); env && *env) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) n = std::min<std::size_t>(n, cap);
  }
  return n;
}

std::vector<CriterionResult> check_taylor() {
  Rng rng(4);
  double worst_ratio_dev = 0.0;
  std::string ratios;
  for (int t = 0; t < 10; ++t) {
    const std::size_t d = between(rng, 1, 16);
    const std::size_t n = between(rng, 1, 16);
    const Matrix z = random_normal(d, n, rng);
    const double s = 1e-2;
    const double r = taylor_gap(FeatureBatch(z * s)) / taylor_gap(FeatureBatch(z * (2 * s)));
    worst_ratio_dev = std::max(worst_ratio_dev, std::abs(r * 16.0 - 1.0));
    ratios += (t ? " " : "") + show(r);
  }
  double worst_gap = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t d = between(rng, 1, 16);
    const std::size_t n = between(rng, 1, 16);
    Matrix z = random_normal(d, n, rng);
    // Scale onto the boundary ||Z||_F / sqrt(n) = 0.1 or strictly inside it.
    const double target = 0.1 * (t % 2 ? 1.0 : rng.uniform());
    z *= target * std::sqrt(static_cast<double>(n)) / norm(z);
    worst_gap = std::max(worst_gap, taylor_gap(FeatureBatch(z)));
  }
  return {
      {4, "taylor ratio gap(sZ)/gap(2sZ) at s=1e-2", worst_ratio_dev <= 0.1,
       "ratios " + ratios + "; worst |16r-1| = " + show(worst_ratio_dev), "1/16 +-10%"},
      {4, "trace vs logdet form for ||Z||_F/sqrt(n) <= 0.1", worst_gap < 1e-3,
       "max gap " + show(worst_gap), "< 1e-3"},
  };
}

std::vector<CriterionResult> check_gradients() {
  constexpr int kInstances = 20;
  constexpr double kTolerance = 1e-6;
  Rng rng(5);
  std::vector<CriterionResult> out;
  auto report = [&](const std::string& name, double worst) {
    out.push_back({5, name + " vs central differences (20 instances)", worst <= kTolerance,
                   "max rel err " + show(worst), "<= 1e-6"});
  };

  double worst = 0.0;
  for (int t = 0; t < kInstances; ++t) {
    Matrix z = random_normal(between(rng, 1, 6), between(rng, 2, 8), rng);
    const RelationMatrix c{random_nonnegative(z.cols(), z.cols(), rng), RelationKind::Learned};
    const Matrix g = l_tr_grad(FeatureBatch(z), c);
    worst = std::max(worst, relative_error(g, numeric_gradient(z, [&] {
                                             return l_tr(FeatureBatch(z), c);
                                           })));
  }
  report("l_tr_grad", worst);

  worst = 0.0;
  for (int t = 0; t < kInstances; ++t) {
    const std::size_t d = between(rng, 1, 5);
    Matrix z = random_normal(d, between(rng, 2, 6), rng);
    Matrix zg = random_normal(d, between(rng, 2, 6), rng);
    const std::size_t n = z.cols(), m = zg.cols();
    RelationMatrix c, cg, cj;
    if (t % 2) {
      const auto lr = random_labels(n, 3, rng);
      const auto lg = random_labels(m, 3, rng);
      std::vector<int> lj(lr);
      lj.insert(lj.end(), lg.begin(), lg.end());
      c = supervised_relation(lr);
      cg = supervised_relation(lg);
      cj = supervised_relation(lj);
    } else {
      c = {random_nonnegative(n, n, rng), RelationKind::Learned};
      cg = {random_nonnegative(m, m, rng), RelationKind::Learned};
      cj = {random_nonnegative(n + m, n + m, rng), RelationKind::Learned};
    }
    auto f = [&] { return l_mac(FeatureBatch(z), FeatureBatch(zg), c, cg, cj); };
    const MacResult r = l_mac_grads(FeatureBatch(z), FeatureBatch(zg), c, cg, cj);
    worst = std::max(worst, relative_error(r.grad_real, numeric_gradient(z, f)));
    worst = std::max(worst, relative_error(r.grad_gen, numeric_gradient(zg, f)));
  }
  report("l_mac_grads", worst);

  worst = 0.0;
  for (int t = 0; t < kInstances; ++t) {
    const std::size_t d = between(rng, 1, 5);
    Matrix z = random_normal(d, between(rng, 2, 6), rng);
    Matrix zg = random_normal(d, between(rng, 2, 6), rng);
    const auto lr = random_labels(z.cols(), 2, rng);
    const auto lg = random_labels(zg.cols(), 2, rng);
    std::vector<int> lj(lr);
    lj.insert(lj.end(), lg.begin(), lg.end());
    const bool singleton = t % 2;
    const Matrix rr = singleton ? singleton_membership_rows(z.cols()) : membership_rows_from_labels(lr);
    const Matrix rg = singleton ? singleton_membership_rows(zg.cols()) : membership_rows_from_labels(lg);
    const Matrix rj = singleton ? singleton_membership_rows(lj.size()) : membership_rows_from_labels(lj);
    auto f = [&] { return l_mac_logdet(z, zg, rr, rg, rj, 0.5).value; };
    const MacResult r = l_mac_logdet(z, zg, rr, rg, rj, 0.5);
    worst = std::max(worst, relative_error(r.grad_real, numeric_gradient(z, f)));
    worst = std::max(worst, relative_error(r.grad_gen, numeric_gradient(zg, f)));
  }
  report("l_mac_logdet", worst);

  worst = 0.0;
  const Activation acts[] = {Activation::ReLU, Activation::LeakyReLU, Activation::Tanh,
                             Activation::Identity, Activation::Logistic};
  for (int t = 0; t < kInstances; ++t) {
    const std::size_t depth = between(rng, 1, 4);
    std::vector<std::size_t> widths{between(rng, 1, 5)};
    std::vector<Activation> layer_acts;
    for (std::size_t l = 0; l < depth; ++l) {
      widths.push_back(between(rng, 1, 6));
      layer_acts.push_back(acts[rng.below(5)]);
    }
    MlpNetwork net = MlpNetwork::build(widths, layer_acts, rng);
    Matrix x = random_normal(widths.front(), between(rng, 1, 4), rng);
    const Matrix upstream = random_normal(widths.back(), x.cols(), rng);
    // A second seed on a hidden layer exercises gradient injection.
    const std::size_t hidden = rng.below(depth);
    const Matrix side = random_normal(widths[hidden + 1], x.cols(), rng);
    auto f = [&] {
      net.forward(x);
      return frobenius_dot(net.output(), upstream) + frobenius_dot(net.layer_output(hidden), side);
    };
    net.forward(x);
    const GradientSeed seeds[] = {{depth - 1, upstream}, {hidden, side}};
    const Gradients g = net.backward(seeds);
    worst = std::max(worst, network_error(net, g, f));
    worst = std::max(worst, relative_error(g.input, numeric_gradient(x, f)));
  }
  report("backward", worst);

  worst = 0.0;
  for (int t = 0; t < kInstances; ++t) {
    const std::size_t d = between(rng, 1, 4);
    const std::size_t n = between(rng, 2, 5);
    MlpNetwork f_net = build_relation_net(d, between(rng, 2, 6), rng);
    // Zero biases put ReLU inputs exactly on the kink; differences would straddle it.
    for (Layer& l : f_net.mutable_layers()) {
      for (double& v : l.bias.values()) v = 0.1 * rng.normal();
    }
    Matrix z = random_normal(d, n, rng);
    const PriorRelation prior = prior_relation(FeatureBatch(random_normal(3, n, rng)), 1.0);
    const double beta = rng.uniform(0.5, 2.0);
    auto f = [&] { return relation_loss(relation_forward(f_net, FeatureBatch(z)), prior, beta).value; };
    const RelationLossResult rl = relation_loss(relation_forward(f_net, FeatureBatch(z)), prior, beta);
    Matrix grad_z;
    const Gradients g = relation_backward(f_net, rl.grad, &grad_z);
    worst = std::max(worst, network_error(f_net, g, f));
    worst = std::max(worst, relative_error(grad_z, numeric_gradient(z, f)));
  }
  report("relation_loss", worst);
  return out;
}

std::vector<CriterionResult> check_relation_prior() {
  Rng rng(6);
  double worst_row = 0.0;
  double worst_rot = 0.0;
  for (double tau : {0.1, 1.0, 10.0}) {
    for (int t = 0; t < 10; ++t) {
      const std::size_t d = between(rng, 1, 8);
      const std::size_t n = between(rng, 2, 24);
      const Matrix e = random_normal(d, n, rng);
      const PriorRelation p = prior_relation(FeatureBatch(e), tau);
      for (std::size_t r = 0; r < n; ++r) {
        double sum = 0.0;
        for (double v : p.data.row(r)) sum += v;
        worst_row = std::max(worst_row, std::abs(sum - 1.0));
      }
      const Matrix q = orthonormal_columns(d, d, rng);
      const PriorRelation pr = prior_relation(FeatureBatch(matmul(q, e)), tau);
      Matrix diff = pr.data;
      diff -= p.data;
      worst_rot = std::max(worst_rot, max_abs(diff));
    }
  }
  return {
      {6, "prior rows sum to 1, tau in {0.1, 1, 10}", worst_row <= 1e-12,
       "max |row sum - 1| " + show(worst_row), "<= 1e-12"},
      {6, "prior invariant under rotation", worst_rot <= 1e-10,
       "max |diff| " + show(worst_rot), "<= 1e-10"},
  };
}

std::vector<CriterionResult> check_ablation_identity(std::size_t iterations) {
  DatasetSpec spec;
  const SyntheticDataset ds(spec);
  std::vector<CriterionResult> out;
  for (RelationMode mode :
       {RelationMode::Supervised, RelationMode::SelfSupervised, RelationMode::Learnable}) {
    GanConfig cfg;
    cfg.lambda = cfg.gamma = cfg.beta = 0.0;
    cfg.relation_mode = mode;
    cfg.iterations = iterations;
    cfg.seed = 11;
    if (mode == RelationMode::Learnable) cfg.batch_size = 32;
    struct Step {
      double d_loss, g_loss;
      std::uint64_t g_hash, d_hash;
    };
    auto record = [](std::vector<Step>& steps) {
      return [&steps](const IterationStats& s) {
        steps.push_back({s.d_loss, s.g_loss, digest(*s.generator), digest(*s.discriminator)});
      };
    };
    std::vector<Step> a, b;
    const TrainResult ra = train(cfg, ds, record(a));
    const TrainResult rb = train_baseline(cfg, ds, record(b));
    std::size_t first_diff = 0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()) && !first_diff; ++i) {
      if (std::memcmp(&a[i].d_loss, &b[i].d_loss, sizeof(double)) != 0 ||
          std::memcmp(&a[i].g_loss, &b[i].g_loss, sizeof(double)) != 0 ||
          a[i].g_hash != b[i].g_hash || a[i].d_hash != b[i].d_hash) {
        first_diff = i + 1;
      }
    }
    const bool same = a.size() == iterations && b.size() == iterations && first_diff == 0 &&
                      ra.generator == rb.generator && ra.discriminator == rb.discriminator;
    out.push_back({7, "lambda=gamma=beta=0 matches baseline (" + std::string(to_string(mode)) + ")",
                   same,
                   same ? std::to_string(iterations) + " iterations bit-identical"
                        : "first divergence at iteration " + std::to_string(first_diff),
                   "bit-identical per iteration"});
  }
  return out;
}

std::vector<CriterionResult> check_spectrum_oracle(const std::filesystem::path& work_dir) {
  namespace fs = std::filesystem;
  Rng rng(8);
  std::vector<double> sig5{5, 4, 3, 2, 1};
  std::vector<double> sig50(50);
  for (std::size_t i = 0; i < 50; ++i) sig50[i] = 2.0 - static_cast<double>(i) / 50.0;

  // Scale so the brightest pixel is at most 1.
  auto image = [&](std::size_t rows, std::size_t cols, std::vector<double>& sigma) {
    Matrix img = block_rank_image(rows, cols, sigma, rng);
    const double peak = max_abs(img);
    img *= 1.0 / peak;
    for (double& s : sigma) s /= peak;
    return img;
  };
  const Matrix img5 = image(64, 48, sig5);
  const Matrix img50 = image(120, 100, sig50);

  // The images go through the same ingestion path as the CLI.
  const fs::path da = work_dir / "rank5";
  const fs::path db = work_dir / "rank50";
  fs::create_directories(da);
  fs::create_directories(db);
  write_csv_image(da / "img.csv", GrayImage::from_matrix(img5));
  write_csv_image(db / "img.csv", GrayImage::from_matrix(img50));
  const SpectrumReport r5 = spectrum(average_image(load_image_directory(da)), 0.999);
  const SpectrumReport r50 = spectrum(average_image(load_image_directory(db)), 0.999);
  write_comparison_csv(work_dir, compare_spectra(r5, r50));

  double worst = 0.0;
  auto match = [&](const SpectrumReport& r, const std::vector<double>& expect) {
    for (std::size_t i = 0; i < r.sigma.size(); ++i) {
      const double e = i < expect.size() ? expect[i] : 0.0;
      const double err = std::abs(r.sigma[i] - e) / expect.front();
      worst = std::max(worst, i < expect.size() ? std::abs(r.sigma[i] - e) / e : err);
    }
  };
  match(r5, sig5);
  match(r50, sig50);

  // Dense random factors exercise the solver away from block structure.
  const Matrix u = orthonormal_columns(40, 5, rng);
  const Matrix v = orthonormal_columns(30, 5, rng);
  Matrix us = u;
  for (std::size_t r = 0; r < us.rows(); ++r) {
    for (std::size_t c = 0; c < 5; ++c) us(r, c) *= sig5[c];
  }
  const SpectrumReport dense = spectrum(matmul_nt(us, v), 0.999);
  double dense_err = 0.0;
  for (std::size_t i = 0; i < dense.sigma.size(); ++i) {
    dense_err = std::max(dense_err, i < 5 ? std::abs(dense.sigma[i] - sig5[i]) / sig5[i]
                                          : dense.sigma[i] / sig5[0]);
  }

  const bool ranks = r5.effective_rank == 5 && r50.effective_rank >= 45 && dense.effective_rank == 5;
  return {
      {8, "effective rank at q=0.999, rank-5 vs rank-50 images", ranks,
       std::to_string(r5.effective_rank) + " vs " + std::to_string(r50.effective_rank) +
           " (dense " + std::to_string(dense.effective_rank) + ")",
       "exactly 5 vs >= 45"},
      {8, "singular values match construction", worst <= 1e-9 && dense_err <= 1e-9,
       "max rel err " + show(std::max(worst, dense_err)), "<= 1e-9"},
  };
}

std::vector<CriterionResult> check_toy_gaussians(const SuiteOptions& opt) {
  const auto runs = run_presets({"eight_gaussians_mac", "eight_gaussians_baseline"}, opt, opt.seeds);
  write_runs_csv(opt.out_dir / "toy_gaussians_runs.csv", runs);
  const auto mac = select(runs, "eight_gaussians_mac");
  const auto base = select(runs, "eight_gaussians_baseline");
  const std::size_t need = required(4, opt.seeds);
  const auto mac_full = std::count_if(mac.begin(), mac.end(), [](auto& r) { return r.covered == 8; });
  const auto base_low = std::count_if(base.begin(), base.end(), [](auto& r) { return r.covered <= 4; });

  double best_base_hq = 0.0;
  for (const auto& r : base) best_base_hq = std::max(best_base_hq, r.hq);
  std::size_t full = 0, above = 0;
  double min_mac_hq = 1.0;
  for (const auto& r : mac) {
    if (r.covered != 8) continue;
    ++full;
    min_mac_hq = std::min(min_mac_hq, r.hq);
    if (r.hq > best_base_hq) ++above;
  }
  return {
      {1, "eight Gaussians: MAC covers 8 modes", static_cast<std::size_t>(mac_full) >= need,
       std::to_string(mac_full) + "/" + std::to_string(mac.size()) + " seeds " + coverage_list(mac),
       ">= " + std::to_string(need) + " seeds with 8"},
      {1, "eight Gaussians: baseline covers <= 4 modes", static_cast<std::size_t>(base_low) >= need,
       std::to_string(base_low) + "/" + std::to_string(base.size()) + " seeds " +
           coverage_list(base),
       ">= " + std::to_string(need) + " seeds with <= 4"},
      {3, "within-mode concentration above best baseline", full > 0 && above == full,
       "MAC min hq " + (full ? show(min_mac_hq) : std::string("n/a")) + " over " +
           std::to_string(full) + " full-coverage runs; best baseline hq " + show(best_base_hq),
       "every full-coverage MAC run > best baseline"},
  };
}

std::vector<CriterionResult> check_toy_vortex(const SuiteOptions& opt) {
  const auto runs = run_presets({"vortex_mac", "vortex_baseline"}, opt, opt.seeds);
  write_runs_csv(opt.out_dir / "toy_vortex_runs.csv", runs);
  const auto mac = select(runs, "vortex_mac");
  const auto base = select(runs, "vortex_baseline");
  const auto mac_full = std::count_if(mac.begin(), mac.end(), [](auto& r) { return r.covered == 3; });
  const auto base_low = std::count_if(base.begin(), base.end(), [](auto& r) { return r.covered <= 2; });
  const std::size_t need_mac = required(4, opt.seeds);
  const std::size_t need_base = required(3, opt.seeds);
  return {
      {2, "vortex: MAC covers 3 arms", static_cast<std::size_t>(mac_full) >= need_mac,
       std::to_string(mac_full) + "/" + std::to_string(mac.size()) + " seeds " + coverage_list(mac),
       ">= " + std::to_string(need_mac) + " seeds with 3"},
      {2, "vortex: baseline covers <= 2 arms", static_cast<std::size_t>(base_low) >= need_base,
       std::to_string(base_low) + "/" + std::to_string(base.size()) + " seeds " +
           coverage_list(base),
       ">= " + std::to_string(need_base) + " seeds with <= 2"},
  };
}

std::vector<CriterionResult> check_loss_variants(const SuiteOptions& opt) {
  const auto runs =
      run_presets({"eight_gaussians_mac_ns", "eight_gaussians_baseline_ns"}, opt, opt.seeds);
  write_runs_csv(opt.out_dir / "loss_variant_runs.csv", runs);
  std::vector<CriterionResult> out;
  for (const char* name : {"eight_gaussians_mac_ns", "eight_gaussians_baseline_ns"}) {
    const auto sel = select(runs, name);
    double hq = 0.0;
    for (const auto& r : sel) hq = std::max(hq, r.hq);
    const auto aborted =
        std::count_if(sel.begin(), sel.end(), [](auto& r) { return r.exit_code != 0; });
    CriterionResult r{1, std::string("non-saturating ") + name + " coverage", true,
                      "modes " + coverage_list(sel) + ", best hq " + show(hq) + ", aborted " +
                          std::to_string(aborted),
                      "reported only"};
    r.informational = true;
    out.push_back(r);
  }
  return out;
}

std::vector<CriterionResult> check_relation_modes(const SuiteOptions& opt) {
  const std::filesystem::path dir = preset_dir_of(opt);
  std::vector<RunJob> jobs;
  for (const char* name :
       {"eight_gaussians_self_supervised", "eight_gaussians_learnable", "vortex_learnable",
        "eight_gaussians_layer0", "eight_gaussians_layer1", "eight_gaussians_layer2",
        "eight_gaussians_mac_ns_flipped", "swiss_roll_mac"}) {
    add_jobs(jobs, name, load_experiment_config(dir / (std::string(name) + ".toml")), 1, opt);
  }
  const ExperimentConfig learnable = load_experiment_config(dir / "eight_gaussians_learnable.toml");
  for (double tau : {0.1, 0.5, 5.0}) {
    ExperimentConfig cfg = learnable;
    cfg.gan.tau = tau;
    add_jobs(jobs, "eight_gaussians_learnable-tau" + show(tau), cfg, 1, opt);
  }
  const auto runs = run_jobs(jobs, opt);
  write_runs_csv(opt.out_dir / "ablation_runs.csv", runs);
  std::vector<CriterionResult> out;
  for (const RunSummary& r : runs) {
    CriterionResult c{0, r.preset, true,
                      std::to_string(r.covered) + " modes, hq " + show(r.hq) +
                          (r.exit_code ? ", aborted" : ""),
                      "reported only"};
    c.informational = true;
    out.push_back(c);
  }
  return out;
}

CriterionResult headline_scope_note() {
  return {9, "headline FID/KID gains are out of desk scope", true,
          "not reproduced; criteria 1-3 substitute", "documented non-reproduction"};
}

std::vector<CriterionResult> run_suite(const std::string& name, const SuiteOptions& opt) {
  if (!is_known_suite(name)) throw InputError("unknown suite '" + name + "'");
  std::vector<CriterionResult> out;
  auto add = [&](std::vector<CriterionResult> r) { out.insert(out.end(), r.begin(), r.end()); };
  auto progress = [&](const char* what) {
    if (opt.progress) *opt.progress << "[suite] " << what << std::endl;
  };
  const bool all = name == "all";
  if (all || name == "taylor") {
    progress("taylor");
    add(check_taylor());
  }
  if (all || name == "gradients") {
    progress("gradients");
    add(check_gradients());
  }
  if (all || name == "relation") {
    progress("relation prior");
    add(check_relation_prior());
  }
  if (all || name == "ablations") {
    progress("ablation identity");
    add(check_ablation_identity());
    progress("relation-mode and layer ablations");
    add(check_relation_modes(opt));
  }
  if (all || name == "spectrum") {
    progress("spectrum oracle");
    add(check_spectrum_oracle(opt.out_dir / "spectrum"));
  }
  if (all || name == "toy-gaussians") {
    progress("eight Gaussians");
    add(check_toy_gaussians(opt));
    progress("eight Gaussians, non-saturating loss");
    add(check_loss_variants(opt));
  }
  if (all || name == "toy-vortex") {
    progress("vortex lines");
    add(check_toy_vortex(opt));
  }
  if (all) out.push_back(headline_scope_note());
  std::stable_sort(out.begin(), out.end(),
                   [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
  return out;
}

void print_results(std::ostream& out, const std::vector<CriterionResult>& results) {
  for (const CriterionResult& r : results) {
    out << (r.informational ? "INFO" : r.passed ? "PASS" : "FAIL") << "  [";
    if (r.id > 0) out << r.id; else out << '-';
    out << "] " << r.name << ": " << r.measured;
    if (!r.informational) out << " (want " << r.threshold << ")";
    out << '\n';
  }
}

void write_suite_summary(const std::filesystem::path& path,
                         const std::vector<CriterionResult>& results) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  CsvWriter csv(path, {"criterion", "check", "passed", "measured", "threshold"});
  for (const CriterionResult& r : results) {
    csv.field(r.id).field(r.name);
    csv.field(std::string(r.informational ? "info" : r.passed ? "true" : "false"));
    csv.field(r.measured).field(r.threshold).end_row();
  }
}

}  // namespace macgan
