#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "emocpm/linear/maxent.hpp"
#include "emocpm/neural/config.hpp"
#include "emocpm/text/embeddings.hpp"

namespace emocpm::app {

// Flat key/value settings. Later layers win: defaults < file < environment < flags.
using Settings = std::map<std::string, std::string>;

struct SettingInfo {
  std::string key;
  std::string default_value;  // empty: unset
  std::string help;
};

// Every recognised key: run keys, model keys, and "sub."-prefixed model keys
// for the component network inside emo-cpm-nn-pred.
const std::vector<SettingInfo>& known_settings();
bool is_known_setting(const std::string& key);

// "key = value" per line; blank lines and lines starting with '#' are
// skipped. Unknown keys and malformed lines are ConfigErrors naming the
// line.
Settings parse_settings(std::istream& in, const std::string& source_name);
Settings load_settings_file(const std::filesystem::path& path);

inline constexpr const char* kEnvPrefix = "EMOCPM_";
// EMOCPM_<KEY> with the key upper-cased and '.' replaced by '_', e.g.
// EMOCPM_SEED or EMOCPM_SUB_EPOCHS. `getenv` is injectable for tests.
std::string env_name(const std::string& key);
Settings settings_from_env(const std::function<const char*(const char*)>& getenv);

// Right-hand settings override left-hand ones.
Settings merge(const Settings& base, const Settings& over);

struct RunOptions {
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = ".";
  std::size_t jobs = 1;
  std::optional<neural::Profile> profile;

  std::optional<std::filesystem::path> embeddings, lexicons, pos, appraisal, token_store;
  text::FallbackEmbedding fallback;

  double train_ratio = 0.9;
  std::size_t folds = 10;
  linear::MaxEntConfig maxent;
  double linear_dev_fraction = 0.1;

  // Model keys set explicitly, applied over the per-tag defaults.
  std::vector<std::pair<std::string, std::string>> model_overrides;
  std::vector<std::pair<std::string, std::string>> submodel_overrides;
};

// Interprets merged settings. Referenced resource paths must exist.
RunOptions resolve_options(const Settings& settings);

// Tag and profile defaults for `tag`, then the overrides; the seed is the run seed.
neural::ModelConfig model_config(const RunOptions& options, neural::NeuralTag tag,
                                 neural::Profile profile);
// Configuration of the component network trained first for emo-cpm-nn-pred.
// It inherits seed, epochs, dev_fraction and kernel_sizes from `main` unless
// a "sub." key overrides them.
neural::ModelConfig submodel_config(const RunOptions& options, const neural::ModelConfig& main,
                                    neural::Profile profile);

}  // namespace emocpm::app
