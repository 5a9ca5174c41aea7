#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "emocpm/autodiff/adam.hpp"
#include "emocpm/data/corpus.hpp"
#include "emocpm/matrix.hpp"
#include "emocpm/neural/model.hpp"
#include "emocpm/neural/network.hpp"

namespace emocpm::neural {

struct Example {
  const Matrix* input = nullptr;
  std::vector<double> emotion_target;  // one entry per inventory class
  std::vector<double> cpm_target;      // five flags, also the gold input of emo-cpm-nn-gold
};

std::vector<Example> make_examples(const data::Corpus& corpus, const std::vector<Matrix>& inputs);

// One Adam step per call over the batch mean loss, with dropout active.
class Trainer {
 public:
  explicit Trainer(Network& net);

  double step(std::span<const Example> batch);
  // Inference-mode mean loss; leaves parameters and gradients untouched.
  double evaluate_loss(std::span<const Example> batch) const;

  Network& network() noexcept { return net_; }
  std::uint64_t steps() const noexcept { return adam_.steps(); }

 private:
  Network& net_;
  ad::Adam adam_;
  DropoutStreams dropout_;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  std::optional<double> dev_macro_f1, dev_micro_f1;
};

struct TrainingLog {
  std::size_t train_size = 0, dev_size = 0;
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;  // 0 = final parameters, no dev set
  std::optional<double> best_dev_macro_f1;
};

struct TrainOptions {
  // Trained cpm-nn-base, required for emo-cpm-nn-pred.
  const NeuralModel* submodel = nullptr;
  // Explicit dev set; otherwise config.dev_fraction of the training data is held out.
  const data::Corpus* dev = nullptr;
  const std::vector<Matrix>* dev_inputs = nullptr;
  std::function<void(const EpochRecord&)> on_epoch;
  // Checked after every epoch with the current parameters; true ends training.
  std::function<bool(const EpochRecord&, const NeuralModel&)> stop;
};

struct TrainResult {
  NeuralModel model;
  TrainingLog log;
};

// Minibatch training with a per-epoch shuffle drawn from config.seed. With a
// dev set the parameters of the epoch with the best dev macro-F1 (earliest on
// ties) are returned; the score is over emotions when the model predicts
// them, else over components.
TrainResult train_neural(NeuralTag tag, const data::Corpus& train, const std::vector<Matrix>& inputs,
                         const ModelConfig& config, const TrainOptions& options = {});

// Macro and micro F1 of the primary head on a labelled corpus.
std::pair<double, double> primary_f1(const NeuralModel& model, const data::Corpus& corpus,
                                     const std::vector<Matrix>& inputs);

}  // namespace emocpm::neural
