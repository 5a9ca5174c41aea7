#include "emocpm/neural/train.hpp"

#include <algorithm>
#include <numeric>

#include "emocpm/data/split.hpp"
#include "emocpm/error.hpp"
#include "emocpm/random.hpp"

namespace emocpm::neural {

std::vector<Example> make_examples(const data::Corpus& corpus, const std::vector<Matrix>& inputs) {
  if (inputs.size() != corpus.size()) {
    throw ShapeError(std::to_string(inputs.size()) + " input matrices for " +
                     std::to_string(corpus.size()) + " instances");
  }
  std::vector<Example> out(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& inst = corpus.instances[i];
    if (inputs[i].rows == 0) throw ShapeError("instance " + inst.id + " has an empty input matrix");
    out[i].input = &inputs[i];
    out[i].emotion_target.assign(corpus.inventory.size(), 0.0);
    for (std::size_t k : corpus.emotion_labels(inst)) out[i].emotion_target[k] = 1.0;
    out[i].cpm_target.assign(inst.cpm.begin(), inst.cpm.end());
  }
  return out;
}

Trainer::Trainer(Network& net)
    : net_(net),
      adam_(ad::AdamConfig{.learning_rate = net.config().learning_rate}),
      dropout_(derive_seed(net.config().seed, fnv1a64("dropout"))) {}

double Trainer::step(std::span<const Example> batch) {
  if (batch.empty()) throw ConfigError("empty minibatch");
  net_.params().zero_grad();
  const double inv = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (const auto& ex : batch) {
    const auto x = ad::tensor({ex.input->rows, ex.input->cols}, ex.input->values);
    const auto out = net_.forward(x, ex.cpm_target, &dropout_);
    const auto loss = net_.loss(out, ex.emotion_target, ex.cpm_target);
    total += loss->item();
    ad::backward(ad::scale(loss, inv));
  }
  adam_.step(net_.params());
  return total * inv;
}

double Trainer::evaluate_loss(std::span<const Example> batch) const {
  if (batch.empty()) throw ConfigError("empty minibatch");
  double total = 0.0;
  for (const auto& ex : batch) {
    const auto x = ad::tensor({ex.input->rows, ex.input->cols}, ex.input->values);
    const auto out = net_.forward(x, ex.cpm_target, nullptr);
    total += ad::detach(net_.loss(out, ex.emotion_target, ex.cpm_target))->item();
  }
  return total / static_cast<double>(batch.size());
}

std::pair<double, double> primary_f1(const NeuralModel& model, const data::Corpus& corpus,
                                     const std::vector<Matrix>& inputs) {
  const auto report = data::evaluate_predictions(corpus, model.predict(corpus, inputs));
  const auto& m = report.emotions ? *report.emotions : *report.components;
  return {m.macro_f1, m.micro_f1};
}

TrainResult train_neural(NeuralTag tag, const data::Corpus& train, const std::vector<Matrix>& inputs,
                         const ModelConfig& config, const TrainOptions& options) {
  config.validate(tag);
  if (train.size() == 0) throw DataError("cannot train on an empty corpus");
  if (inputs.size() != train.size()) {
    throw ShapeError(std::to_string(inputs.size()) + " input matrices for " +
                     std::to_string(train.size()) + " instances");
  }
  const std::size_t dim = inputs.front().cols;
  for (const auto& m : inputs)
    if (m.cols != dim) throw ShapeError("input matrices disagree on their column count");

  std::optional<ModelConfig> sub_config;
  if (tag == NeuralTag::EmoCpmNnPred) {
    if (!options.submodel) throw ConfigError("emo-cpm-nn-pred needs a trained cpm-nn-base");
    sub_config = options.submodel->config();
  }

  // Dev protocol: an explicit dev set, or a seeded hold-out of the training data.
  data::Corpus fit_corpus, dev_corpus;
  std::vector<Matrix> fit_inputs, dev_inputs;
  if (options.dev) {
    if (!options.dev_inputs || options.dev_inputs->size() != options.dev->size())
      throw ShapeError("dev corpus and dev inputs disagree in size");
    fit_corpus = train;
    fit_inputs = inputs;
    dev_corpus = *options.dev;
    dev_inputs = *options.dev_inputs;
  } else if (config.dev_fraction > 0.0 && train.size() >= 2) {
    const auto split = data::split_indices(train.size(), 1.0 - config.dev_fraction,
                                           derive_seed(config.seed, fnv1a64("dev-split")));
    fit_corpus = train.subset(split.train);
    dev_corpus = train.subset(split.test);
    for (auto i : split.train) fit_inputs.push_back(inputs[i]);
    for (auto i : split.test) dev_inputs.push_back(inputs[i]);
  } else {
    fit_corpus = train;
    fit_inputs = inputs;
  }
  if (fit_corpus.size() == 0) throw DataError("training split is empty");
  const bool has_dev = dev_corpus.size() > 0;

  NeuralModel model(tag, config, dim, train.inventory, train.mode, sub_config);
  if (tag == NeuralTag::EmoCpmNnPred) model.network().load_submodel(options.submodel->network());

  const auto examples = make_examples(fit_corpus, fit_inputs);
  Trainer trainer(model.network());
  Rng order_rng(derive_seed(config.seed, fnv1a64("order")));
  std::vector<std::size_t> order(examples.size());
  std::vector<Example> batch;

  TrainResult result{std::move(model), {}};
  auto& log = result.log;
  log.train_size = fit_corpus.size();
  log.dev_size = dev_corpus.size();
  std::vector<std::vector<double>> best;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    order_rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.minibatch_size) {
      const std::size_t end = std::min(order.size(), start + config.minibatch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(examples[order[i]]);
      loss_sum += trainer.step(batch) * static_cast<double>(batch.size());
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(examples.size());
    if (has_dev) {
      const auto [macro, micro] = primary_f1(result.model, dev_corpus, dev_inputs);
      rec.dev_macro_f1 = macro;
      rec.dev_micro_f1 = micro;
      if (!log.best_dev_macro_f1 || macro > *log.best_dev_macro_f1) {
        log.best_dev_macro_f1 = macro;
        log.best_epoch = epoch;
        best = result.model.network().params().snapshot();
      }
    }
    log.epochs.push_back(rec);
    if (options.on_epoch) options.on_epoch(rec);
    if (options.stop && options.stop(rec, result.model)) break;
  }
  if (!best.empty()) result.model.network().params().restore(best);
  return result;
}

}  // namespace emocpm::neural
