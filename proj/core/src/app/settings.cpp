#include "emocpm/app/settings.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>

#include "emocpm/detail/parse.hpp"
#include "emocpm/error.hpp"

namespace emocpm::app {

namespace {

constexpr const char* kSubPrefix = "sub.";

std::vector<SettingInfo> build_settings() {
  std::vector<SettingInfo> s = {
      {"seed", "0", "master seed for every random choice"},
      {"out", ".", "output directory"},
      {"jobs", "1", "worker threads for crossval folds and one-vs-rest training"},
      {"profile", "", "reman or tec hyperparameter column; default follows the corpus mode"},
      {"embeddings", "", "word vectors (GloVe text layout) for the linear emb block"},
      {"lexicons", "", "directory of component lexicons; default is the bundled set"},
      {"pos", "", "part-of-speech sidecar for the linear pos block"},
      {"appraisal", "", "appraisal sidecar for the linear appraisal block"},
      {"token_store", "", "precomputed token-level input matrices for neural models"},
      {"fallback", "true", "hashed token vectors for instances missing from the token store"},
      {"fallback_dim", "64", "width of the hashed token vectors"},
      {"train_ratio", "0.9", "training share for split and ablate"},
      {"folds", "10", "number of crossval folds"},
      {"maxent_iterations", "200", "full-batch Adam iterations per maximum-entropy model"},
      {"maxent_learning_rate", "0.1", "Adam step size of the maximum-entropy models"},
      {"maxent_l2", "0.0001", "L2 penalty of the maximum-entropy models"},
      {"linear_dev_fraction", "0.1", "hold-out share for the cpm-me-adv feature search"},
  };
  const auto model = neural::config_items(neural::ModelConfig{});
  for (const auto& [k, v] : model) {
    if (k == "seed") continue;
    s.push_back({k, "", "neural model hyperparameter (per-tag default)"});
  }
  for (const auto& [k, v] : model) {
    if (k == "seed") continue;
    s.push_back({kSubPrefix + k, "", "hyperparameter of the emo-cpm-nn-pred component network"});
  }
  return s;
}

bool truthy(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

template <typename Int>
Int integer(const std::string& key, const std::string& v) {
  const auto x = detail::to_int<Int>(v);
  if (!x) throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  return *x;
}

double real(const std::string& key, const std::string& v) {
  const auto x = detail::to_double(v);
  if (!x) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return *x;
}

std::filesystem::path existing(const std::string& key, const std::string& v) {
  std::filesystem::path p(v);
  if (!std::filesystem::exists(p)) throw ResourceError(key + ": " + v + " does not exist");
  return p;
}

}  // namespace

const std::vector<SettingInfo>& known_settings() {
  static const std::vector<SettingInfo> settings = build_settings();
  return settings;
}

bool is_known_setting(const std::string& key) {
  const auto& s = known_settings();
  return std::any_of(s.begin(), s.end(), [&](const SettingInfo& i) { return i.key == key; });
}

Settings parse_settings(std::istream& in, const std::string& source_name) {
  Settings out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    auto where = [&] { return source_name + ":" + std::to_string(lineno) + ": "; };
    if (eq == std::string_view::npos) throw ConfigError(where() + "expected key = value");
    const std::string key(detail::trim(t.substr(0, eq)));
    const std::string value(detail::trim(t.substr(eq + 1)));
    if (key.empty()) throw ConfigError(where() + "empty key");
    if (!is_known_setting(key)) throw ConfigError(where() + "unknown key '" + key + "'");
    out[key] = value;
  }
  return out;
}

Settings load_settings_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_settings(in, path.string());
}

std::string env_name(const std::string& key) {
  std::string out = kEnvPrefix;
  for (char c : key) out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

Settings settings_from_env(const std::function<const char*(const char*)>& getenv) {
  Settings out;
  for (const auto& info : known_settings()) {
    if (const char* v = getenv(env_name(info.key).c_str())) out[info.key] = v;
  }
  return out;
}

Settings merge(const Settings& base, const Settings& over) {
  Settings out = base;
  for (const auto& [k, v] : over) out[k] = v;
  return out;
}

RunOptions resolve_options(const Settings& settings) {
  RunOptions o;
  for (const auto& [key, v] : settings) {
    if (!is_known_setting(key)) throw ConfigError("unknown setting '" + key + "'");
    if (key == "seed") {
      o.seed = integer<std::uint64_t>(key, v);
    } else if (key == "out") {
      if (v.empty()) throw ConfigError("out: empty path");
      o.out_dir = v;
    } else if (key == "jobs") {
      o.jobs = integer<std::size_t>(key, v);
      if (o.jobs == 0) throw ConfigError("jobs must be >= 1");
    } else if (key == "profile") {
      if (!v.empty()) o.profile = neural::parse_profile(v);
    } else if (key == "embeddings" || key == "lexicons" || key == "pos" || key == "appraisal" ||
               key == "token_store") {
      if (v.empty()) continue;
      auto p = existing(key, v);
      if (key == "embeddings") o.embeddings = p;
      if (key == "lexicons") o.lexicons = p;
      if (key == "pos") o.pos = p;
      if (key == "appraisal") o.appraisal = p;
      if (key == "token_store") o.token_store = p;
    } else if (key == "fallback") {
      o.fallback.enabled = truthy(key, v);
    } else if (key == "fallback_dim") {
      o.fallback.dimension = integer<std::size_t>(key, v);
      if (o.fallback.dimension == 0) throw ConfigError("fallback_dim must be >= 1");
    } else if (key == "train_ratio") {
      o.train_ratio = real(key, v);
      if (!(o.train_ratio > 0.0 && o.train_ratio < 1.0)) throw ConfigError("train_ratio must lie in (0, 1)");
    } else if (key == "folds") {
      o.folds = integer<std::size_t>(key, v);
      if (o.folds < 2) throw ConfigError("folds must be >= 2");
    } else if (key == "maxent_iterations") {
      o.maxent.iterations = integer<std::size_t>(key, v);
    } else if (key == "maxent_learning_rate") {
      o.maxent.learning_rate = real(key, v);
      if (!(o.maxent.learning_rate > 0.0)) throw ConfigError("maxent_learning_rate must be > 0");
    } else if (key == "maxent_l2") {
      o.maxent.l2 = real(key, v);
      if (!(o.maxent.l2 >= 0.0)) throw ConfigError("maxent_l2 must be >= 0");
    } else if (key == "linear_dev_fraction") {
      o.linear_dev_fraction = real(key, v);
      if (!(o.linear_dev_fraction > 0.0 && o.linear_dev_fraction < 1.0))
        throw ConfigError("linear_dev_fraction must lie in (0, 1)");
    } else if (key.starts_with(kSubPrefix)) {
      o.submodel_overrides.emplace_back(key.substr(4), v);
    } else {
      o.model_overrides.emplace_back(key, v);
    }
  }
  // Overrides are checked now so that bad values fail before any work.
  neural::ModelConfig probe;
  for (const auto& [k, v] : o.model_overrides) neural::apply_config_item(probe, k, v);
  for (const auto& [k, v] : o.submodel_overrides) neural::apply_config_item(probe, k, v);
  o.fallback.seed = o.seed;
  return o;
}

neural::ModelConfig model_config(const RunOptions& options, neural::NeuralTag tag,
                                 neural::Profile profile) {
  auto cfg = neural::default_config(tag, profile);
  for (const auto& [k, v] : options.model_overrides) neural::apply_config_item(cfg, k, v);
  cfg.seed = options.seed;
  cfg.validate(tag);
  return cfg;
}

neural::ModelConfig submodel_config(const RunOptions& options, const neural::ModelConfig& main,
                                    neural::Profile profile) {
  auto cfg = neural::default_config(neural::NeuralTag::CpmNnBase, profile);
  cfg.seed = main.seed;
  cfg.epochs = main.epochs;
  cfg.dev_fraction = main.dev_fraction;
  cfg.kernel_sizes = main.kernel_sizes;
  for (const auto& [k, v] : options.submodel_overrides) neural::apply_config_item(cfg, k, v);
  cfg.seed = main.seed;
  cfg.validate(neural::NeuralTag::CpmNnBase);
  return cfg;
}

}  // namespace emocpm::app
