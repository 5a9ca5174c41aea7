#include <benchmark/benchmark.h>

#include <filesystem>

#include "emocpm/autodiff/layers.hpp"
#include "emocpm/autodiff/ops.hpp"
#include "emocpm/data/corpus.hpp"
#include "emocpm/data/metrics.hpp"
#include "emocpm/linear/maxent.hpp"
#include "emocpm/neural/train.hpp"
#include "emocpm/text/embeddings.hpp"
#include "emocpm/text/porter.hpp"
#include "emocpm/text/tfidf.hpp"
#include "emocpm/text/tokenizer.hpp"

using namespace emocpm;

namespace {

const data::Corpus& tec() {
  static const auto corpus =
      data::load_corpus(std::filesystem::path(EMOCPM_REPO_DATA_DIR) / "synthetic" / "tec_synthetic.jsonl");
  return corpus;
}

const std::vector<std::vector<std::string>>& stemmed_docs() {
  static const auto docs = [] {
    std::vector<std::vector<std::string>> out;
    for (const auto& inst : tec().instances) out.push_back(text::stem(text::tokenize(inst.text)).tokens);
    return out;
  }();
  return docs;
}

void BM_TokenizeAndStem(benchmark::State& state) {
  for (auto _ : state) {
    std::size_t n = 0;
    for (const auto& inst : tec().instances) n += text::stem(text::tokenize(inst.text)).tokens.size();
    benchmark::DoNotOptimize(n);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tec().size()));
}
BENCHMARK(BM_TokenizeAndStem);

void BM_TfIdfFit(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(text::TfIdfModel::fit(stemmed_docs()).dimension());
}
BENCHMARK(BM_TfIdfFit);

void BM_MaxEntMultinomial(benchmark::State& state) {
  const auto model = text::TfIdfModel::fit(stemmed_docs());
  std::vector<SparseVector> x;
  std::vector<std::size_t> y;
  for (std::size_t i = 0; i < tec().size(); ++i) {
    x.push_back(model.transform(stemmed_docs()[i]));
    y.push_back(tec().emotion_labels(tec().instances[i]).front());
  }
  linear::MaxEntConfig cfg;
  cfg.iterations = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto m = linear::MaxEntModel::train_multinomial(x, y, model.dimension(), tec().inventory, cfg);
    benchmark::DoNotOptimize(m.bias().data());
  }
}
BENCHMARK(BM_MaxEntMultinomial)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_BiLstmForwardBackward(benchmark::State& state) {
  const auto steps = static_cast<std::size_t>(state.range(0));
  ad::ParameterSet params;
  Rng rng(1);
  ad::BiLstm lstm(params, "lstm", 64, 32, rng);
  std::vector<double> data(steps * 64);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = 0.01 * static_cast<double>(i % 97) - 0.4;
  const auto x = ad::tensor({steps, 64}, data);
  for (auto _ : state) {
    params.zero_grad();
    ad::backward(ad::sum(lstm(x)));
  }
}
BENCHMARK(BM_BiLstmForwardBackward)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_TrainerStep(benchmark::State& state) {
  const auto tag = static_cast<neural::NeuralTag>(state.range(0));
  auto cfg = neural::default_config(tag, neural::Profile::Tec);
  text::FallbackEmbedding fallback;
  fallback.dimension = 32;
  const auto inputs = text::resolve_token_embeddings(tec(), nullptr, fallback);
  auto examples = neural::make_examples(tec(), inputs);
  examples.resize(cfg.minibatch_size);
  neural::Network net(tag, cfg, fallback.dimension, tec().inventory.size());
  neural::Trainer trainer(net);
  for (auto _ : state) benchmark::DoNotOptimize(trainer.step(examples));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(examples.size()));
}
BENCHMARK(BM_TrainerStep)
    ->Arg(static_cast<int>(neural::NeuralTag::EmoNnBase))
    ->Arg(static_cast<int>(neural::NeuralTag::MtlMh))
    ->Arg(static_cast<int>(neural::NeuralTag::MtlXs))
    ->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  std::vector<data::LabeledItem> gold, pred;
  for (std::size_t i = 0; i < tec().size(); ++i) {
    const auto& inst = tec().instances[i];
    gold.push_back({inst.id, tec().emotion_labels(inst)});
    pred.push_back({inst.id, {i % tec().inventory.size()}});
  }
  for (auto _ : state) benchmark::DoNotOptimize(data::evaluate(gold, pred, tec().inventory).macro_f1);
}
BENCHMARK(BM_Evaluate);

}  // namespace

BENCHMARK_MAIN();
