#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace emocpm::neural {

enum class NeuralTag { EmoNnBase, CpmNnBase, EmoCpmNnGold, EmoCpmNnPred, MtlMh, MtlXs };

std::string_view to_string(NeuralTag tag);
std::optional<NeuralTag> parse_neural_tag(std::string_view tag);

// Hyperparameter column set: REMAN values for multi-label corpora, TEC
// values for single-label ones.
enum class Profile { Reman, Tec };
std::string_view to_string(Profile p);
Profile parse_profile(std::string_view s);

struct ModelConfig {
  // Trunk sizes. The *_cpm variants size the component trunk of mtl-xs.
  std::size_t bilstm_units = 24;
  std::size_t bilstm_units_cpm = 24;
  std::size_t cnn_filters = 10;
  std::size_t cnn_filters_cpm = 10;
  // 0 means no hidden layer: emo-cpm-nn-gold then feeds the raw flags into
  // the combining layer.
  std::size_t fc_neurons_cpm = 128;
  std::size_t fc_neurons_emo = 128;
  std::size_t fc_neurons_combined = 128;
  double loss_weight_emo = 1.0;  // positive-class weight of the emotion loss
  double loss_weight_cpm = 1.0;
  double task_weight_emo = 1.0;
  double task_weight_cpm = 1.0;
  std::size_t minibatch_size = 50;
  std::vector<std::size_t> kernel_sizes = {2, 3, 5, 7, 13, 25};
  double dropout_rate = 0.5;
  double learning_rate = 1e-3;
  std::size_t epochs = 100;
  std::uint64_t seed = 0;
  bool per_channel_alpha = false;
  bool freeze_alpha = false;
  double dev_fraction = 0.1;

  // Throws ConfigError naming the offending key.
  void validate(NeuralTag tag) const;
};

// Hyperparameters of the given tag and corpus profile.
ModelConfig default_config(NeuralTag tag, Profile profile);

// Flat key/value view used by config files and checkpoints.
std::vector<std::pair<std::string, std::string>> config_items(const ModelConfig& config);
// Returns false when `key` is not a model key; malformed values throw
// ConfigError.
bool apply_config_item(ModelConfig& config, std::string_view key, std::string_view value);

}  // namespace emocpm::neural
