#include "emocpm/linear/pipeline.hpp"

#include <json.hpp>

#include "emocpm/data/split.hpp"
#include "emocpm/error.hpp"

namespace emocpm::linear {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

constexpr std::array<std::pair<LinearTag, std::string_view>, 5> kTags = {{
    {LinearTag::EmoMeBase, "emo-me-base"},
    {LinearTag::CpmMeBase, "cpm-me-base"},
    {LinearTag::CpmMeAdv, "cpm-me-adv"},
    {LinearTag::EmoCpmMePred, "emo-cpm-me-pred"},
    {LinearTag::EmoCpmMeGold, "emo-cpm-me-gold"},
}};

bool needs_components(LinearTag t) {
  return t == LinearTag::CpmMeBase || t == LinearTag::CpmMeAdv || t == LinearTag::EmoCpmMePred;
}

FeatureResources with_lexicons(FeatureResources r, const std::vector<text::DictionaryLexicon>& own) {
  if ((!r.lexicons || r.lexicons->empty()) && !own.empty()) r.lexicons = &own;
  return r;
}

json model_to_json(const MaxEntModel& m) {
  return {{"mode", m.mode() == MaxEntMode::Binary ? "binary" : "multinomial"},
          {"classes", m.classes()},
          {"rows", m.weights().rows},
          {"cols", m.weights().cols},
          {"weights", m.weights().values},
          {"bias", m.bias()}};
}

MaxEntModel model_from_json(const json& j) {
  Matrix w(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  w.values = j.at("weights").get<std::vector<double>>();
  return MaxEntModel::from_parts(j.at("mode") == "binary" ? MaxEntMode::Binary : MaxEntMode::Multinomial,
                                 j.at("classes").get<std::vector<std::string>>(), std::move(w),
                                 j.at("bias").get<std::vector<double>>());
}

}  // namespace

std::string_view to_string(LinearTag tag) {
  for (auto [t, name] : kTags)
    if (t == tag) return name;
  return "emo-me-base";
}

std::optional<LinearTag> parse_linear_tag(std::string_view tag) {
  for (auto [t, name] : kTags)
    if (name == tag) return t;
  return std::nullopt;
}

LinearPipeline LinearPipeline::train(LinearTag tag, const data::Corpus& train,
                                     const FeatureResources& resources, const LinearConfig& config) {
  if (train.empty()) throw DataError("linear training: empty training corpus");
  LinearPipeline p;
  p.tag_ = tag;
  p.mode_ = train.mode;
  p.inventory_ = train.inventory;
  if (resources.lexicons) p.lexicons_ = *resources.lexicons;
  const auto res = with_lexicons(resources, p.lexicons_);

  const auto prepared = prepare(train);
  p.tfidf_ = text::TfIdfModel::fit(prepared.stems);

  if (needs_components(tag)) {
    const bool search = tag != LinearTag::CpmMeBase;
    std::optional<std::pair<data::Corpus, data::Corpus>> split;
    for (std::size_t c = 0; c < data::kNumComponents; ++c) {
      FeatureCombination combo;
      if (search && config.combinations[c]) {
        combo = *config.combinations[c];
      } else if (search) {
        if (!split) split = data::split_train_test(train, 1.0 - config.dev_fraction, config.seed);
        auto s = feature_combination_search(split->first, split->second, c, res, config.maxent);
        combo = s.best;
        p.searches_.push_back(std::move(s));
      }
      FeatureBuilder builder(p.tfidf_, combo, res, c);
      std::vector<std::uint8_t> y;
      for (const auto& inst : train.instances) y.push_back(inst.cpm[c]);
      auto model = MaxEntModel::train_binary(builder.build_all(prepared), y, builder.dimension(),
                                             std::string(data::kComponentNames[c]), config.maxent);
      if (model.degenerate())
        p.warnings_.push_back("component " + std::string(data::kComponentNames[c]) +
                              " has a single class in training; using a constant predictor");
      p.components_.push_back({combo, std::move(model)});
    }
  }

  if (!p.has_emotion_head()) return p;

  const std::size_t base_dim = p.tfidf_.dimension();
  std::vector<SparseVector> x;
  x.reserve(train.size());
  std::optional<std::vector<std::vector<double>>> predicted;
  if (tag == LinearTag::EmoCpmMePred) predicted = p.component_scores(prepared, res);
  for (std::size_t i = 0; i < train.size(); ++i) {
    auto v = p.tfidf_.transform(prepared.stems[i]);
    if (tag == LinearTag::EmoCpmMeGold) {
      v = stack_component_features(v, base_dim, train.instances[i].cpm);
    } else if (tag == LinearTag::EmoCpmMePred) {
      const auto flags = data::decide_components((*predicted)[i]);
      v = stack_component_features(v, base_dim, flags);
    }
    x.push_back(std::move(v));
  }
  const std::size_t dim = base_dim + (tag == LinearTag::EmoMeBase ? 0 : data::kNumComponents);

  if (train.mode == data::TaskMode::SingleLabel) {
    std::vector<std::size_t> y;
    for (const auto& inst : train.instances) y.push_back(train.emotion_labels(inst).at(0));
    p.emotion_multinomial_ = MaxEntModel::train_multinomial(x, y, dim, train.inventory, config.maxent);
    if (p.emotion_multinomial_->degenerate())
      p.warnings_.push_back("emotion training data has a single class; using a constant predictor");
  } else {
    std::vector<std::vector<std::size_t>> y;
    for (const auto& inst : train.instances) y.push_back(train.emotion_labels(inst));
    p.emotion_ovr_ = OneVsRestEnsemble::train(x, y, dim, train.inventory, config.maxent, config.jobs);
    for (const auto& m : p.emotion_ovr_->models())
      if (m.degenerate())
        p.warnings_.push_back("label " + m.classes()[0] +
                              " has a single class in training; using a constant predictor");
  }
  return p;
}

std::vector<std::vector<double>> LinearPipeline::component_scores(
    const PreparedCorpus& prepared, const FeatureResources& resources) const {
  std::vector<std::vector<double>> out(prepared.ids.size(), std::vector<double>(data::kNumComponents));
  for (std::size_t c = 0; c < components_.size(); ++c) {
    FeatureBuilder builder(tfidf_, components_[c].combination, resources, c);
    for (std::size_t i = 0; i < prepared.ids.size(); ++i) {
      const auto v = builder.build(prepared.ids[i], prepared.tokens[i], prepared.stems[i]);
      out[i][c] = components_[c].model.scores(v)[0];
    }
  }
  return out;
}

data::PredictionSet LinearPipeline::predict(const data::Corpus& corpus,
                                            const FeatureResources& resources) const {
  const auto res = with_lexicons(resources, lexicons_);
  const auto prepared = prepare(corpus);
  data::PredictionSet out;
  out.inventory = inventory_;
  out.mode = mode_;
  out.emotion_head = has_emotion_head();
  out.cpm_head = has_cpm_head();

  std::vector<std::vector<double>> cpm;
  if (has_cpm_head()) cpm = component_scores(prepared, res);
  const std::size_t base_dim = tfidf_.dimension();
  std::optional<std::size_t> neutral;
  for (std::size_t i = 0; i < inventory_.size(); ++i)
    if (inventory_[i] == data::kNeutral) neutral = i;

  for (std::size_t i = 0; i < corpus.size(); ++i) {
    data::InstancePrediction pred;
    pred.id = corpus.instances[i].id;
    if (has_cpm_head()) {
      pred.cpm_scores = cpm[i];
      pred.cpm = data::decide_components(cpm[i]);
    }
    if (has_emotion_head()) {
      auto v = tfidf_.transform(prepared.stems[i]);
      if (tag_ == LinearTag::EmoCpmMeGold) v = stack_component_features(v, base_dim, corpus.instances[i].cpm);
      if (tag_ == LinearTag::EmoCpmMePred) v = stack_component_features(v, base_dim, *pred.cpm);
      if (emotion_multinomial_) {
        pred.emotion_scores = emotion_multinomial_->scores(v);
      } else {
        pred.emotion_scores = emotion_ovr_->scores(v);
      }
      pred.emotions = data::decide_labels(pred.emotion_scores, mode_, neutral);
    }
    out.items.push_back(std::move(pred));
  }
  return out;
}

std::string LinearPipeline::to_json() const {
  json j;
  j["format"] = "emocpm-linear";
  j["version"] = kFormatVersion;
  j["tag"] = to_string(tag_);
  j["mode"] = data::to_string(mode_);
  j["inventory"] = inventory_;
  j["tfidf"] = {{"corpus_size", tfidf_.corpus_size()}, {"terms", tfidf_.terms()}, {"df", tfidf_.df_by_index()}};
  j["lexicons"] = json::array();
  for (const auto& l : lexicons_) j["lexicons"].push_back({{"component", l.component}, {"entries", l.entries}});
  if (emotion_multinomial_) j["emotion_model"] = model_to_json(*emotion_multinomial_);
  if (emotion_ovr_) {
    j["emotion_ensemble"] = json::array();
    for (const auto& m : emotion_ovr_->models()) j["emotion_ensemble"].push_back(model_to_json(m));
  }
  j["components"] = json::array();
  for (const auto& c : components_)
    j["components"].push_back({{"features", c.combination.name()}, {"model", model_to_json(c.model)}});
  return j.dump();
}

LinearPipeline LinearPipeline::from_json(std::string_view text) {
  LinearPipeline p;
  try {
    const auto j = json::parse(text);
    if (j.at("format") != "emocpm-linear") throw DataError("not a linear model checkpoint");
    if (j.at("version").get<int>() != kFormatVersion)
      throw DataError("unsupported linear checkpoint version " + j.at("version").dump());
    const auto tag = parse_linear_tag(j.at("tag").get<std::string>());
    if (!tag) throw DataError("unknown linear tag " + j.at("tag").dump());
    p.tag_ = *tag;
    p.mode_ = data::parse_task_mode(j.at("mode").get<std::string>());
    p.inventory_ = j.at("inventory").get<std::vector<std::string>>();
    const auto& t = j.at("tfidf");
    p.tfidf_ = text::TfIdfModel::from_parts(t.at("terms").get<std::vector<std::string>>(),
                                            t.at("df").get<std::vector<std::size_t>>(),
                                            t.at("corpus_size").get<std::size_t>());
    for (const auto& l : j.at("lexicons"))
      p.lexicons_.push_back({l.at("component").get<std::string>(), l.at("entries").get<std::set<std::string>>()});
    if (j.contains("emotion_model")) p.emotion_multinomial_ = model_from_json(j.at("emotion_model"));
    if (j.contains("emotion_ensemble")) {
      std::vector<MaxEntModel> models;
      for (const auto& m : j.at("emotion_ensemble")) models.push_back(model_from_json(m));
      p.emotion_ovr_ = OneVsRestEnsemble::from_models(std::move(models));
    }
    for (const auto& c : j.at("components"))
      p.components_.push_back({FeatureCombination::parse(c.at("features").get<std::string>()),
                               model_from_json(c.at("model"))});
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed linear checkpoint: ") + e.what());
  }
  if (p.has_emotion_head() && !p.emotion_multinomial_ && !p.emotion_ovr_)
    throw DataError("linear checkpoint lacks its emotion model");
  if (needs_components(p.tag_) && p.components_.size() != data::kNumComponents)
    throw DataError("linear checkpoint lacks component models");
  return p;
}

}  // namespace emocpm::linear
