#include "emocpm/neural/model.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "emocpm/error.hpp"

namespace emocpm::neural {

using nlohmann::ordered_json;

namespace {

constexpr const char* kFormat = "emocpm-neural";
constexpr int kVersion = 1;

ordered_json config_json(const ModelConfig& cfg) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : config_items(cfg)) j[k] = v;
  return j;
}

ModelConfig config_from_json(const ordered_json& j) {
  ModelConfig cfg;
  if (!j.is_object()) throw DataError("checkpoint config must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw DataError("checkpoint config value for " + k + " must be a string");
    try {
      if (!apply_config_item(cfg, k, v.get<std::string>()))
        throw DataError("checkpoint has unknown config key " + k);
    } catch (const ConfigError& e) {
      throw DataError(std::string("checkpoint config: ") + e.what());
    }
  }
  return cfg;
}

}  // namespace

void check_compatible(const data::Corpus& corpus, const std::vector<std::string>& inventory,
                      data::TaskMode mode) {
  if (corpus.mode != mode) {
    throw ConfigError("model is " + std::string(data::to_string(mode)) + " but the corpus is " +
                      std::string(data::to_string(corpus.mode)));
  }
  if (corpus.inventory != inventory) {
    throw ConfigError("corpus emotion inventory differs from the model inventory");
  }
}

NeuralModel::NeuralModel(NeuralTag tag, const ModelConfig& config, std::size_t input_dim,
                         std::vector<std::string> inventory, data::TaskMode mode,
                         const std::optional<ModelConfig>& submodel_config)
    : net_(std::make_unique<Network>(tag, config, input_dim, inventory.size(), submodel_config)),
      inventory_(std::move(inventory)),
      mode_(mode) {}

ForwardOutput NeuralModel::infer(const Matrix& input, const data::CpmFlags& gold_cpm) const {
  if (input.rows == 0) throw ShapeError("neural input has no rows");
  if (input.cols != net_->input_dim()) {
    throw ShapeError("neural input has " + std::to_string(input.cols) + " columns, model expects " +
                     std::to_string(net_->input_dim()));
  }
  const auto x = ad::tensor({input.rows, input.cols}, input.values);
  const std::array<double, data::kNumComponents> cpm = {
      double(gold_cpm[0]), double(gold_cpm[1]), double(gold_cpm[2]), double(gold_cpm[3]),
      double(gold_cpm[4])};
  return net_->forward(x, cpm, nullptr);
}

data::PredictionSet NeuralModel::predict(const data::Corpus& corpus,
                                         const std::vector<Matrix>& inputs) const {
  check_compatible(corpus, inventory_, mode_);
  if (inputs.size() != corpus.size()) {
    throw ShapeError(std::to_string(inputs.size()) + " input matrices for " +
                     std::to_string(corpus.size()) + " instances");
  }
  data::PredictionSet out;
  out.inventory = inventory_;
  out.mode = mode_;
  out.emotion_head = net_->has_emotion_head();
  out.cpm_head = net_->has_cpm_head();
  const auto neutral = corpus.label_index(data::kNeutral);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& inst = corpus.instances[i];
    const auto fwd = infer(inputs[i], inst.cpm);
    data::InstancePrediction p;
    p.id = inst.id;
    if (fwd.emotion) {
      p.emotion_scores = fwd.emotion->data();
      p.emotions = data::decide_labels(p.emotion_scores, mode_, neutral);
    }
    if (fwd.cpm) {
      p.cpm_scores = fwd.cpm->data();
      p.cpm = data::decide_components(p.cpm_scores);
    }
    out.items.push_back(std::move(p));
  }
  return out;
}

std::string NeuralModel::to_json() const {
  ordered_json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["tag"] = to_string(tag());
  j["config"] = config_json(config());
  if (net_->submodel_config()) j["submodel_config"] = config_json(*net_->submodel_config());
  j["input_dim"] = net_->input_dim();
  j["inputs"] = {{"fallback", input_fallback.enabled},
                 {"fallback_dim", input_fallback.dimension},
                 {"fallback_seed", input_fallback.seed}};
  if (input_store) j["inputs"]["store"] = *input_store;
  j["inventory"] = inventory_;
  j["mode"] = data::to_string(mode_);
  ordered_json params = ordered_json::array();
  for (const auto& p : net_->params().items()) {
    params.push_back({{"name", p.name},
                      {"shape", {p.value->rows(), p.value->cols()}},
                      {"frozen", p.frozen},
                      {"data", p.value->data()}});
  }
  j["params"] = std::move(params);
  return j.dump(1) + "\n";
}

NeuralModel NeuralModel::from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("neural checkpoint is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != kFormat) throw DataError("not an emocpm-neural checkpoint");
    const int version = j.at("version").get<int>();
    if (version != kVersion)
      throw DataError("unsupported neural checkpoint version " + std::to_string(version));
    const auto tag = parse_neural_tag(j.at("tag").get<std::string>());
    if (!tag) throw DataError("unknown neural tag in checkpoint");
    const auto cfg = config_from_json(j.at("config"));
    std::optional<ModelConfig> sub;
    if (j.contains("submodel_config")) sub = config_from_json(j.at("submodel_config"));
    NeuralModel model(*tag, cfg, j.at("input_dim").get<std::size_t>(),
                      j.at("inventory").get<std::vector<std::string>>(),
                      data::parse_task_mode(j.at("mode").get<std::string>()), sub);
    const auto& inputs = j.at("inputs");
    model.input_fallback.enabled = inputs.at("fallback").get<bool>();
    model.input_fallback.dimension = inputs.at("fallback_dim").get<std::size_t>();
    model.input_fallback.seed = inputs.at("fallback_seed").get<std::uint64_t>();
    if (inputs.contains("store")) model.input_store = inputs.at("store").get<std::string>();

    auto& items = model.net_->params().items();
    const auto& params = j.at("params");
    if (params.size() != items.size()) {
      throw DataError("checkpoint holds " + std::to_string(params.size()) + " tensors, " +
                      std::string(to_string(*tag)) + " needs " + std::to_string(items.size()));
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto& pj = params[i];
      auto& p = items[i];
      if (pj.at("name").get<std::string>() != p.name)
        throw DataError("checkpoint tensor " + std::to_string(i) + " should be " + p.name);
      const auto shape = pj.at("shape").get<std::vector<std::size_t>>();
      if (shape.size() != 2 || shape[0] != p.value->rows() || shape[1] != p.value->cols())
        throw DataError("checkpoint tensor " + p.name + " has the wrong shape");
      auto values = pj.at("data").get<std::vector<double>>();
      if (values.size() != p.value->size())
        throw DataError("checkpoint tensor " + p.name + " has the wrong number of values");
      p.value->data() = std::move(values);
      if (pj.at("frozen").get<bool>() && !p.frozen) model.net_->params().freeze_prefix(p.name);
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed neural checkpoint: ") + e.what());
  }
}

void NeuralModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write checkpoint " + path.string());
  out << to_json();
  if (!out) throw Error("failed writing checkpoint " + path.string());
}

NeuralModel NeuralModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace emocpm::neural
