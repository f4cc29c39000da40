#include "macgan/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "macgan/csv.hpp"

namespace macgan {
namespace {

const std::set<std::string> kSections{"run", "dataset", "gan", "architecture", "optimizer",
                                      "evaluation"};

using Value = std::variant<bool, long long, double, std::string, std::vector<long long>>;

struct Entry {
  Value value;
  std::size_t line = 0;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Drops a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

bool parse_integer(const std::string& s, long long& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_number(const std::string& s, double& out) {
  const char* begin = s.data();
  if (!s.empty() && s[0] == '+') ++begin;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(std::size_t line, const std::string& msg) const {
    throw InputError(source_ + ":" + std::to_string(line) + ": " + msg);
  }

  Value parse_value(const std::string& raw, std::size_t line, const std::string& key) const {
    if (raw.empty()) fail(line, key + ": missing value");
    if (raw == "true") return true;
    if (raw == "false") return false;
    if (raw.front() == '"') {
      if (raw.size() < 2 || raw.back() != '"') fail(line, key + ": unterminated string");
      const std::string body = raw.substr(1, raw.size() - 2);
      if (body.find('"') != std::string::npos) fail(line, key + ": stray quote in string");
      return body;
    }
    if (raw.front() == '[') {
      if (raw.back() != ']') fail(line, key + ": unterminated array");
      std::vector<long long> items;
      std::stringstream ss(raw.substr(1, raw.size() - 2));
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
          if (ss.eof()) break;  // trailing comma
          fail(line, key + ": empty array element");
        }
        long long v = 0;
        if (!parse_integer(item, v)) fail(line, key + ": array elements must be integers");
        items.push_back(v);
      }
      return items;
    }
    long long i = 0;
    if (parse_integer(raw, i)) return i;
    double d = 0.0;
    if (parse_number(raw, d)) return d;
    fail(line, key + ": cannot parse value '" + raw + "'");
  }

  std::map<std::string, Entry> parse(const std::string& text) const {
    std::map<std::string, Entry> entries;
    std::string section;
    std::istringstream in(text);
    std::string raw_line;
    std::size_t line = 0;
    while (std::getline(in, raw_line)) {
      ++line;
      const std::string content = trim(strip_comment(raw_line));
      if (content.empty()) continue;
      if (content.front() == '[') {
        if (content.back() != ']') fail(line, "malformed section header");
        section = trim(std::string_view(content).substr(1, content.size() - 2));
        if (section.empty()) fail(line, "empty section name");
        if (!kSections.count(section)) fail(line, "unknown section [" + section + "]");
        continue;
      }
      const auto eq = content.find('=');
      if (eq == std::string::npos) fail(line, "expected key = value");
      const std::string key = trim(std::string_view(content).substr(0, eq));
      if (key.empty()) fail(line, "missing key");
      const std::string full = section.empty() ? key : section + "." + key;
      Value v = parse_value(trim(std::string_view(content).substr(eq + 1)), line, full);
      if (!entries.emplace(full, Entry{std::move(v), line}).second) {
        fail(line, "duplicate key '" + full + "'");
      }
    }
    return entries;
  }

 private:
  std::string source_;
};

class Binder {
 public:
  Binder(const Parser& p, std::map<std::string, Entry> entries)
      : parser_(p), entries_(std::move(entries)) {}

  template <class Setter>
  void bind(const std::string& key, Setter&& set) {
    known_.insert(key);
    auto it = entries_.find(key);
    if (it == entries_.end()) return;
    try {
      set(it->second.value, key);
    } catch (const InputError& e) {
      parser_.fail(it->second.line, e.what());
    }
  }

  void reject_unknown() const {
    for (const auto& [key, entry] : entries_) {
      if (!known_.count(key)) parser_.fail(entry.line, "unknown key '" + key + "'");
    }
  }

 private:
  const Parser& parser_;
  std::map<std::string, Entry> entries_;
  std::set<std::string> known_;
};

[[noreturn]] void type_error(const std::string& key, const char* expected) {
  throw InputError(key + ": expected " + expected);
}

double as_double(const Value& v, const std::string& key) {
  if (auto d = std::get_if<double>(&v)) return *d;
  if (auto i = std::get_if<long long>(&v)) return static_cast<double>(*i);
  type_error(key, "a number");
}

std::size_t as_count(const Value& v, const std::string& key) {
  auto i = std::get_if<long long>(&v);
  if (!i) type_error(key, "an integer");
  if (*i < 0) type_error(key, "a non-negative integer");
  return static_cast<std::size_t>(*i);
}

bool as_bool(const Value& v, const std::string& key) {
  auto b = std::get_if<bool>(&v);
  if (!b) type_error(key, "true or false");
  return *b;
}

const std::string& as_string(const Value& v, const std::string& key) {
  auto s = std::get_if<std::string>(&v);
  if (!s) type_error(key, "a quoted string");
  return *s;
}

std::vector<std::size_t> as_widths(const Value& v, const std::string& key) {
  auto a = std::get_if<std::vector<long long>>(&v);
  if (!a) type_error(key, "an array of integers");
  std::vector<std::size_t> out;
  for (long long x : *a) {
    if (x < 1) type_error(key, "positive layer widths");
    out.push_back(static_cast<std::size_t>(x));
  }
  return out;
}

auto number(double& field) {
  return [&field](const Value& v, const std::string& k) { field = as_double(v, k); };
}
auto count(std::size_t& field) {
  return [&field](const Value& v, const std::string& k) { field = as_count(v, k); };
}
auto flag(bool& field) {
  return [&field](const Value& v, const std::string& k) { field = as_bool(v, k); };
}

void bind_optimizer(Binder& b, const std::string& prefix, AdamConfig& a) {
  b.bind("optimizer." + prefix + "learning_rate", number(a.learning_rate));
  b.bind("optimizer." + prefix + "beta1", number(a.beta1));
  b.bind("optimizer." + prefix + "beta2", number(a.beta2));
  b.bind("optimizer." + prefix + "epsilon", number(a.epsilon));
}

std::string kernel_sign_name(KernelSign s) {
  return s == KernelSign::Negative ? "negative" : "positive";
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source_name) {
  const Parser parser(source_name);
  Binder b(parser, parser.parse(text));
  ExperimentConfig cfg;
  GanConfig& g = cfg.gan;
  DatasetSpec& ds = cfg.dataset;

  b.bind("run.seed", [&](const Value& v, const std::string& k) { g.seed = as_count(v, k); });
  b.bind("run.iterations", count(g.iterations));
  b.bind("run.output_dir",
         [&](const Value& v, const std::string& k) { cfg.output_dir = as_string(v, k); });
  b.bind("run.emit_plots", flag(cfg.emit_plots));
  b.bind("run.log_interval", count(g.log_interval));
  b.bind("run.log_wall_time", flag(g.log_wall_time));

  b.bind("dataset.kind", [&](const Value& v, const std::string& k) {
    ds.kind = dataset_kind_from_string(as_string(v, k));
  });
  b.bind("dataset.gaussian_modes", count(ds.gaussian_modes));
  b.bind("dataset.radius", number(ds.radius));
  b.bind("dataset.sigma", number(ds.sigma));
  b.bind("dataset.arms", count(ds.arms));
  b.bind("dataset.inner_radius", number(ds.inner_radius));
  b.bind("dataset.outer_radius", number(ds.outer_radius));
  b.bind("dataset.turns", number(ds.turns));
  b.bind("dataset.roll_height", number(ds.roll_height));
  b.bind("dataset.roll_segments", count(ds.roll_segments));

  b.bind("gan.lambda", number(g.lambda));
  b.bind("gan.gamma", number(g.gamma));
  b.bind("gan.beta", number(g.beta));
  b.bind("gan.tau", number(g.tau));
  b.bind("gan.loss", [&](const Value& v, const std::string& k) {
    g.loss_variant = loss_variant_from_string(as_string(v, k));
  });
  b.bind("gan.relation_mode", [&](const Value& v, const std::string& k) {
    g.relation_mode = relation_mode_from_string(as_string(v, k));
  });
  b.bind("gan.measure_form", [&](const Value& v, const std::string& k) {
    g.measure_form = measure_form_from_string(as_string(v, k));
  });
  b.bind("gan.rate_epsilon", number(g.rate_epsilon));
  b.bind("gan.batch_size", count(g.batch_size));
  b.bind("gan.d_steps_per_g", count(g.d_steps_per_g));
  b.bind("gan.clip_limit", number(g.clip_limit));
  b.bind("gan.mac_sign_flip", flag(g.mac_sign_flip));
  b.bind("gan.kernel_sign", [&](const Value& v, const std::string& k) {
    const std::string& s = as_string(v, k);
    if (s == "negative") g.kernel_sign = KernelSign::Negative;
    else if (s == "positive") g.kernel_sign = KernelSign::Positive;
    else throw InputError(k + ": expected \"negative\" or \"positive\"");
  });
  b.bind("gan.relation_grad_into_features", flag(g.relation_grad_into_features));
  b.bind("gan.prior_encoder", [&](const Value& v, const std::string& k) {
    g.prior_encoder = prior_encoder_from_string(as_string(v, k));
  });
  b.bind("gan.prior_projection_dim", count(g.prior_projection_dim));

  b.bind("architecture.latent_dim", count(g.latent_dim));
  b.bind("architecture.generator_hidden", [&](const Value& v, const std::string& k) {
    g.generator_hidden = as_widths(v, k);
  });
  b.bind("architecture.discriminator_hidden", [&](const Value& v, const std::string& k) {
    g.discriminator_hidden = as_widths(v, k);
  });
  b.bind("architecture.representation_layer", [&](const Value& v, const std::string& k) {
    g.representation_layer = as_count(v, k);
  });
  b.bind("architecture.branch_dim", count(g.branch_dim));
  b.bind("architecture.relation_hidden", count(g.relation_hidden));

  bind_optimizer(b, "generator_", g.generator_optimizer);
  bind_optimizer(b, "discriminator_", g.discriminator_optimizer);
  bind_optimizer(b, "relation_", g.relation_optimizer);

  b.bind("evaluation.eval_samples", count(g.eval_samples));
  b.bind("evaluation.coverage_threshold_sigma", number(g.coverage_threshold_sigma));
  b.bind("evaluation.coverage_min_fraction", number(g.coverage_min_fraction));

  b.reject_unknown();
  g.validate();
  SyntheticDataset check(ds);  // validates the dataset section
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_config(text.str(), path.string());
}

std::string render_experiment_config(const ExperimentConfig& cfg) {
  const GanConfig& g = cfg.gan;
  const DatasetSpec& ds = cfg.dataset;
  std::ostringstream out;
  auto num = [](double v) { return format_double(v); };
  auto boolean = [](bool b) { return b ? "true" : "false"; };
  auto str = [](std::string_view s) { return "\"" + std::string(s) + "\""; };
  auto widths = [](const std::vector<std::size_t>& w) {
    std::string s = "[";
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? ", " : "") + std::to_string(w[i]);
    return s + "]";
  };

  out << "[run]\n"
      << "seed = " << g.seed << '\n'
      << "iterations = " << g.iterations << '\n'
      << "output_dir = " << str(cfg.output_dir.generic_string()) << '\n'
      << "emit_plots = " << boolean(cfg.emit_plots) << '\n'
      << "log_interval = " << g.log_interval << '\n'
      << "log_wall_time = " << boolean(g.log_wall_time) << "\n\n";

  out << "[dataset]\n"
      << "kind = " << str(to_string(ds.kind)) << '\n'
      << "gaussian_modes = " << ds.gaussian_modes << '\n'
      << "radius = " << num(ds.radius) << '\n'
      << "sigma = " << num(ds.sigma) << '\n'
      << "arms = " << ds.arms << '\n'
      << "inner_radius = " << num(ds.inner_radius) << '\n'
      << "outer_radius = " << num(ds.outer_radius) << '\n'
      << "turns = " << num(ds.turns) << '\n'
      << "roll_height = " << num(ds.roll_height) << '\n'
      << "roll_segments = " << ds.roll_segments << "\n\n";

  out << "[gan]\n"
      << "lambda = " << num(g.lambda) << '\n'
      << "gamma = " << num(g.gamma) << '\n'
      << "beta = " << num(g.beta) << '\n'
      << "tau = " << num(g.tau) << '\n'
      << "loss = " << str(to_string(g.loss_variant)) << '\n'
      << "relation_mode = " << str(to_string(g.relation_mode)) << '\n'
      << "measure_form = " << str(to_string(g.measure_form)) << '\n'
      << "rate_epsilon = " << num(g.rate_epsilon) << '\n'
      << "batch_size = " << g.batch_size << '\n'
      << "d_steps_per_g = " << g.d_steps_per_g << '\n'
      << "clip_limit = " << num(g.clip_limit) << '\n'
      << "mac_sign_flip = " << boolean(g.mac_sign_flip) << '\n'
      << "kernel_sign = " << str(kernel_sign_name(g.kernel_sign)) << '\n'
      << "relation_grad_into_features = " << boolean(g.relation_grad_into_features) << '\n'
      << "prior_encoder = " << str(to_string(g.prior_encoder)) << '\n'
      << "prior_projection_dim = " << g.prior_projection_dim << "\n\n";

  out << "[architecture]\n"
      << "latent_dim = " << g.latent_dim << '\n'
      << "generator_hidden = " << widths(g.generator_hidden) << '\n'
      << "discriminator_hidden = " << widths(g.discriminator_hidden) << '\n';
  if (g.representation_layer) {
    out << "representation_layer = " << *g.representation_layer << '\n';
  } else {
    out << "# representation_layer unset: " << g.resolved_representation_layer() << " for this mode\n";
  }
  out << "branch_dim = " << g.branch_dim << '\n'
      << "relation_hidden = " << g.relation_hidden << "\n\n";

  out << "[optimizer]\n";
  auto adam = [&](const std::string& prefix, const AdamConfig& a) {
    out << prefix << "learning_rate = " << num(a.learning_rate) << '\n'
        << prefix << "beta1 = " << num(a.beta1) << '\n'
        << prefix << "beta2 = " << num(a.beta2) << '\n'
        << prefix << "epsilon = " << num(a.epsilon) << '\n';
  };
  adam("generator_", g.generator_optimizer);
  adam("discriminator_", g.discriminator_optimizer);
  adam("relation_", g.relation_optimizer);
  out << '\n';

  out << "[evaluation]\n"
      << "eval_samples = " << g.eval_samples << '\n'
      << "coverage_threshold_sigma = " << num(g.coverage_threshold_sigma) << '\n'
      << "coverage_min_fraction = " << num(g.coverage_min_fraction) << '\n';
  return out.str();
}

}  // namespace macgan
