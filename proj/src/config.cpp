#include "vendirl/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace vendirl {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct ConfigEntry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct ParsedFile {
  std::string source;
  std::map<std::string, std::map<std::string, ConfigEntry>> sections;

  [[noreturn]] void fail_at(int line, const std::string& msg) const {
    fail(ErrorCode::config_error, source + ":" + std::to_string(line) + ": " + msg);
  }
};

ParsedFile parse_file_text(const std::string& text, const std::string& source) {
  ParsedFile file;
  file.source = source;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') file.fail_at(lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) file.fail_at(lineno, "empty section name");
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) file.fail_at(lineno, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) file.fail_at(lineno, "empty key");
    if (section.empty()) file.fail_at(lineno, "key '" + key + "' outside any [section]");
    auto& sec = file.sections[section];
    if (sec.count(key)) file.fail_at(lineno, "duplicate key '" + key + "'");
    sec[key] = ConfigEntry{value, lineno, false};
  }
  return file;
}

class Reader {
 public:
  explicit Reader(ParsedFile& file) : file_(file) {}

  bool has(const std::string& section, const std::string& key) {
    auto s = file_.sections.find(section);
    return s != file_.sections.end() && s->second.count(key) > 0;
  }

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) {
    auto s = file_.sections.find(section);
    if (s == file_.sections.end()) return fallback;
    auto k = s->second.find(key);
    if (k == s->second.end()) return fallback;
    k->second.used = true;
    return k->second.value;
  }

  long long get_int(const std::string& section, const std::string& key, long long fallback) {
    if (!has(section, key)) return fallback;
    const ConfigEntry& e = entry(section, key);
    try {
      std::size_t pos = 0;
      long long v = std::stoll(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      file_.fail_at(e.line, "field '" + section + "." + key + "': expected integer, got '" +
                                e.value + "'");
    }
  }

  double get_double(const std::string& section, const std::string& key, double fallback) {
    if (!has(section, key)) return fallback;
    const ConfigEntry& e = entry(section, key);
    try {
      std::size_t pos = 0;
      double v = std::stod(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      file_.fail_at(e.line, "field '" + section + "." + key + "': expected number, got '" +
                                e.value + "'");
    }
  }

  bool get_bool(const std::string& section, const std::string& key, bool fallback) {
    if (!has(section, key)) return fallback;
    const ConfigEntry& e = entry(section, key);
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    file_.fail_at(e.line, "field '" + section + "." + key + "': expected true/false");
  }

  std::vector<int> get_int_list(const std::string& section, const std::string& key,
                                std::vector<int> fallback) {
    if (!has(section, key)) return fallback;
    const ConfigEntry& e = entry(section, key);
    if (e.value == "none") return {};  // e.g. a linear policy with no hidden layers
    std::vector<int> out;
    std::istringstream in(e.value);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      try {
        out.push_back(std::stoi(trim(tok)));
      } catch (...) {
        file_.fail_at(e.line, "field '" + section + "." + key + "': expected integer list");
      }
    }
    if (out.empty())
      file_.fail_at(e.line, "field '" + section + "." + key + "': empty list (use 'none')");
    return out;
  }

  // Every key must have been consumed; typos fail loudly.
  void check_unused() {
    for (const auto& [section, keys] : file_.sections)
      for (const auto& [key, e] : keys)
        if (!e.used) file_.fail_at(e.line, "unknown field '" + section + "." + key + "'");
  }

  const ConfigEntry& entry(const std::string& section, const std::string& key) {
    ConfigEntry& e = file_.sections[section][key];
    e.used = true;
    return e;
  }

  ParsedFile& file_;
};

SimilaritySpec read_similarity_spec(Reader& reader, ParsedFile& file,
                                    const std::string& section, SimilaritySpec spec) {
  if (reader.has(section, "terms")) {
    const ConfigEntry& e = reader.entry(section, "terms");
    try {
      spec.terms = parse_kernel_terms(e.value);
    } catch (const Error& err) {
      file.fail_at(e.line, std::string("field '") + section + ".terms': " + err.what());
    }
  }
  spec.knn_k = static_cast<int>(reader.get_int(section, "knn_k", spec.knn_k));
  spec.rollouts_per_skill = static_cast<int>(
      reader.get_int(section, "rollouts_per_skill", spec.rollouts_per_skill));
  if (reader.has(section, "mean_reference")) {
    const ConfigEntry& e = reader.entry(section, "mean_reference");
    try {
      spec.mean_reference = parse_mean_reference(e.value);
    } catch (const Error& err) {
      file.fail_at(e.line, err.what());
    }
  }
  spec.cosine_rescale = reader.get_bool(section, "cosine_rescale", spec.cosine_rescale);
  spec.psd_clamp = reader.get_bool(section, "psd_clamp", spec.psd_clamp);
  return spec;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void render_similarity_spec(std::ostream& out, const std::string& section,
                            const SimilaritySpec& spec) {
  out << "[" << section << "]\n";
  out << "terms = " << render_kernel_terms(spec.terms) << "\n";
  out << "knn_k = " << spec.knn_k << "\n";
  out << "rollouts_per_skill = " << spec.rollouts_per_skill << "\n";
  out << "mean_reference = " << mean_reference_name(spec.mean_reference) << "\n";
  out << "cosine_rescale = " << (spec.cosine_rescale ? "true" : "false") << "\n";
  out << "psd_clamp = " << (spec.psd_clamp ? "true" : "false") << "\n";
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "vendirl") return Method::vendirl;
  if (name == "misl") return Method::misl;
  if (name == "random") return Method::random;
  fail(ErrorCode::config_error, "unknown method '" + name + "' (vendirl|misl|random)");
}

RewardTransform parse_transform(const std::string& name) {
  if (name == "raw") return RewardTransform::raw;
  if (name == "time_derivative") return RewardTransform::time_derivative;
  if (name == "penalty") return RewardTransform::penalty;
  if (name == "log_fraction") return RewardTransform::log_fraction;
  fail(ErrorCode::config_error,
       "unknown transform '" + name + "' (raw|time_derivative|penalty|log_fraction)");
}

const char* transform_name(RewardTransform t) {
  switch (t) {
    case RewardTransform::raw: return "raw";
    case RewardTransform::time_derivative: return "time_derivative";
    case RewardTransform::penalty: return "penalty";
    case RewardTransform::log_fraction: return "log_fraction";
  }
  return "?";
}

ReturnBaseline parse_baseline(const std::string& name) {
  if (name == "none") return ReturnBaseline::none;
  if (name == "episode_mean") return ReturnBaseline::episode_mean;
  fail(ErrorCode::config_error, "unknown baseline '" + name + "' (none|episode_mean)");
}

const char* baseline_name(ReturnBaseline b) {
  return b == ReturnBaseline::none ? "none" : "episode_mean";
}

MeanReference parse_mean_reference(const std::string& name) {
  if (name == "raw") return MeanReference::raw;
  if (name == "relative_to_start") return MeanReference::relative_to_start;
  fail(ErrorCode::config_error,
       "unknown mean_reference '" + name + "' (raw|relative_to_start)");
}

const char* mean_reference_name(MeanReference m) {
  return m == MeanReference::raw ? "raw" : "relative_to_start";
}

KernelKind parse_kernel_kind(const std::string& name) {
  if (name == "cosine_of_means") return KernelKind::cosine_of_means;
  if (name == "mmd_linear") return KernelKind::mmd_linear;
  if (name == "covariance_structure") return KernelKind::covariance_structure;
  if (name == "knn_f1_overlap") return KernelKind::knn_f1_overlap;
  fail(ErrorCode::config_error,
       "unknown kernel '" + name +
           "' (cosine_of_means|mmd_linear|covariance_structure|knn_f1_overlap)");
}

std::vector<std::pair<KernelKind, double>> parse_kernel_terms(const std::string& text) {
  std::vector<std::pair<KernelKind, double>> terms;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    std::size_t colon = tok.find(':');
    std::string kind = trim(colon == std::string::npos ? tok : tok.substr(0, colon));
    double weight = 1.0;
    if (colon != std::string::npos) {
      try {
        weight = std::stod(trim(tok.substr(colon + 1)));
      } catch (...) {
        fail(ErrorCode::config_error, "bad kernel weight in '" + tok + "'");
      }
    }
    terms.emplace_back(parse_kernel_kind(kind), weight);
  }
  if (terms.empty()) fail(ErrorCode::config_error, "empty kernel term list");
  return terms;
}

std::string render_kernel_terms(const std::vector<std::pair<KernelKind, double>>& terms) {
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out += ',';
    out += kernel_kind_name(terms[i].first);
    out += ':';
    out += format_double(terms[i].second);
  }
  return out;
}

ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::string& source_name) {
  ParsedFile file = parse_file_text(text, source_name);
  Reader reader(file);
  ExperimentConfig cfg;

  if (reader.has("run", "method")) {
    const ConfigEntry& e = reader.entry("run", "method");
    try {
      cfg.method = parse_method(e.value);
    } catch (const Error& err) {
      file.fail_at(e.line, err.what());
    }
  }
  cfg.out_dir = reader.get_string("run", "out_dir", cfg.out_dir);
  cfg.log_wall_time = reader.get_bool("run", "log_wall_time", cfg.log_wall_time);
  cfg.train.seed = static_cast<std::uint64_t>(
      reader.get_int("run", "seed", static_cast<long long>(cfg.train.seed)));

  TrainConfig& t = cfg.train;
  t.n_skills = static_cast<int>(reader.get_int("train", "n_skills", t.n_skills));
  t.epochs = static_cast<int>(reader.get_int("train", "epochs", t.epochs));
  t.steps_per_epoch =
      static_cast<int>(reader.get_int("train", "steps_per_epoch", t.steps_per_epoch));
  t.scenes = static_cast<int>(reader.get_int("train", "scenes", t.scenes));
  t.eval_every = static_cast<int>(reader.get_int("train", "eval_every", t.eval_every));
  t.threads = static_cast<int>(reader.get_int("train", "threads", t.threads));
  if (reader.has("train", "transform")) {
    const ConfigEntry& e = reader.entry("train", "transform");
    try {
      t.transform = parse_transform(e.value);
    } catch (const Error& err) {
      file.fail_at(e.line, err.what());
    }
  }

  t.train_spec = read_similarity_spec(reader, file, "kernel", t.train_spec);
  t.eval_spec = read_similarity_spec(reader, file, "eval_kernel", t.eval_spec);

  EnvConfig& env = t.env;
  env.min_x = reader.get_double("env", "min_x", env.min_x);
  env.min_y = reader.get_double("env", "min_y", env.min_y);
  env.max_x = reader.get_double("env", "max_x", env.max_x);
  env.max_y = reader.get_double("env", "max_y", env.max_y);
  env.start.x = reader.get_double("env", "start_x", env.start.x);
  env.start.y = reader.get_double("env", "start_y", env.start.y);
  env.max_action_norm = reader.get_double("env", "max_action_norm", env.max_action_norm);
  env.episode_len = static_cast<int>(reader.get_int("env", "episode_len", env.episode_len));
  env.action_noise_std =
      reader.get_double("env", "action_noise_std", env.action_noise_std);

  PolicyConfig& p = t.policy;
  p.hidden = reader.get_int_list("policy", "hidden", p.hidden);
  p.log_std_min = reader.get_double("policy", "log_std_min", p.log_std_min);
  p.log_std_max = reader.get_double("policy", "log_std_max", p.log_std_max);
  t.hyper.learning_rate =
      reader.get_double("policy", "learning_rate", t.hyper.learning_rate);
  t.hyper.discount = reader.get_double("policy", "discount", t.hyper.discount);
  t.hyper.grad_clip_norm =
      reader.get_double("policy", "grad_clip_norm", t.hyper.grad_clip_norm);
  t.hyper.whiten_returns =
      reader.get_bool("policy", "whiten_returns", t.hyper.whiten_returns);
  if (reader.has("policy", "baseline")) {
    const ConfigEntry& e = reader.entry("policy", "baseline");
    try {
      t.hyper.baseline = parse_baseline(e.value);
    } catch (const Error& err) {
      file.fail_at(e.line, err.what());
    }
  }

  t.disc.hidden = reader.get_int_list("misl", "disc_hidden", t.disc.hidden);
  t.disc.learning_rate =
      reader.get_double("misl", "disc_learning_rate", t.disc.learning_rate);
  t.misl_logprob_floor =
      reader.get_double("misl", "logprob_floor", t.misl_logprob_floor);

  cfg.plot.rollouts_per_skill = static_cast<int>(
      reader.get_int("plot", "rollouts_per_skill", cfg.plot.rollouts_per_skill));

  reader.check_unused();
  cfg.train.validate();
  if (cfg.plot.rollouts_per_skill < 1)
    fail(ErrorCode::config_error, "plot: rollouts_per_skill must be >= 1");
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::config_error, "config file not found: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_config(text.str(), path);
}

std::string render_resolved_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[run]\n";
  out << "method = " << method_name(cfg.method) << "\n";
  out << "out_dir = " << cfg.out_dir << "\n";
  out << "seed = " << cfg.train.seed << "\n";
  out << "log_wall_time = " << (cfg.log_wall_time ? "true" : "false") << "\n";
  out << "\n[train]\n";
  out << "n_skills = " << cfg.train.n_skills << "\n";
  out << "epochs = " << cfg.train.epochs << "\n";
  out << "steps_per_epoch = " << cfg.train.steps_per_epoch << "\n";
  out << "scenes = " << cfg.train.scenes << "\n";
  out << "eval_every = " << cfg.train.eval_every << "\n";
  out << "threads = " << cfg.train.threads << "\n";
  out << "transform = " << transform_name(cfg.train.transform) << "\n";
  out << "\n";
  render_similarity_spec(out, "kernel", cfg.train.train_spec);
  out << "\n";
  render_similarity_spec(out, "eval_kernel", cfg.train.eval_spec);
  const EnvConfig& env = cfg.train.env;
  out << "\n[env]\n";
  out << "min_x = " << format_double(env.min_x) << "\n";
  out << "min_y = " << format_double(env.min_y) << "\n";
  out << "max_x = " << format_double(env.max_x) << "\n";
  out << "max_y = " << format_double(env.max_y) << "\n";
  out << "start_x = " << format_double(env.start.x) << "\n";
  out << "start_y = " << format_double(env.start.y) << "\n";
  out << "max_action_norm = " << format_double(env.max_action_norm) << "\n";
  out << "episode_len = " << env.episode_len << "\n";
  out << "action_noise_std = " << format_double(env.action_noise_std) << "\n";
  out << "\n[policy]\n";
  out << "hidden = ";
  if (cfg.train.policy.hidden.empty()) out << "none";
  for (std::size_t i = 0; i < cfg.train.policy.hidden.size(); ++i)
    out << (i ? "," : "") << cfg.train.policy.hidden[i];
  out << "\n";
  out << "log_std_min = " << format_double(cfg.train.policy.log_std_min) << "\n";
  out << "log_std_max = " << format_double(cfg.train.policy.log_std_max) << "\n";
  out << "learning_rate = " << format_double(cfg.train.hyper.learning_rate) << "\n";
  out << "discount = " << format_double(cfg.train.hyper.discount) << "\n";
  out << "grad_clip_norm = " << format_double(cfg.train.hyper.grad_clip_norm) << "\n";
  out << "whiten_returns = " << (cfg.train.hyper.whiten_returns ? "true" : "false") << "\n";
  out << "baseline = " << baseline_name(cfg.train.hyper.baseline) << "\n";
  out << "\n[misl]\n";
  out << "disc_hidden = ";
  for (std::size_t i = 0; i < cfg.train.disc.hidden.size(); ++i)
    out << (i ? "," : "") << cfg.train.disc.hidden[i];
  out << "\n";
  out << "disc_learning_rate = " << format_double(cfg.train.disc.learning_rate) << "\n";
  out << "logprob_floor = " << format_double(cfg.train.misl_logprob_floor) << "\n";
  out << "\n[plot]\n";
  out << "rollouts_per_skill = " << cfg.plot.rollouts_per_skill << "\n";
  return out.str();
}

}  // namespace vendirl
