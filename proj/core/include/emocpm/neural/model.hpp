#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emocpm/data/corpus.hpp"
#include "emocpm/data/prediction.hpp"
#include "emocpm/matrix.hpp"
#include "emocpm/neural/network.hpp"
#include "emocpm/text/embeddings.hpp"

namespace emocpm::neural {

// A network together with the label inventory it was trained on and the
// recipe for building its token-level inputs.
class NeuralModel {
 public:
  NeuralModel(NeuralTag tag, const ModelConfig& config, std::size_t input_dim,
              std::vector<std::string> inventory, data::TaskMode mode,
              const std::optional<ModelConfig>& submodel_config = std::nullopt);

  NeuralModel(NeuralModel&&) noexcept = default;
  NeuralModel& operator=(NeuralModel&&) noexcept = default;

  NeuralTag tag() const { return net_->tag(); }
  const ModelConfig& config() const { return net_->config(); }
  const std::vector<std::string>& inventory() const noexcept { return inventory_; }
  data::TaskMode mode() const noexcept { return mode_; }
  Network& network() noexcept { return *net_; }
  const Network& network() const noexcept { return *net_; }

  // How inputs were produced; stored so prediction can rebuild them.
  text::FallbackEmbedding input_fallback;
  std::optional<std::string> input_store;

  // Inference-mode probabilities for one instance. gold_cpm is read only by
  // emo-cpm-nn-gold.
  ForwardOutput infer(const Matrix& input, const data::CpmFlags& gold_cpm) const;

  // Corpus inventory and mode must match the model's. inputs[i] belongs to
  // corpus.instances[i].
  data::PredictionSet predict(const data::Corpus& corpus, const std::vector<Matrix>& inputs) const;

  std::string to_json() const;
  static NeuralModel from_json(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static NeuralModel load(const std::filesystem::path& path);

 private:
  std::unique_ptr<Network> net_;
  std::vector<std::string> inventory_;
  data::TaskMode mode_;
};

// Fails with ConfigError when the corpus labels cannot be scored by a model
// for `inventory`/`mode`.
void check_compatible(const data::Corpus& corpus, const std::vector<std::string>& inventory,
                      data::TaskMode mode);

}  // namespace emocpm::neural
