#include "emocpm/neural/config.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include "emocpm/detail/parse.hpp"
#include "emocpm/error.hpp"

namespace emocpm::neural {

namespace {

constexpr std::array<std::pair<NeuralTag, std::string_view>, 6> kTags = {{
    {NeuralTag::EmoNnBase, "emo-nn-base"},
    {NeuralTag::CpmNnBase, "cpm-nn-base"},
    {NeuralTag::EmoCpmNnGold, "emo-cpm-nn-gold"},
    {NeuralTag::EmoCpmNnPred, "emo-cpm-nn-pred"},
    {NeuralTag::MtlMh, "mtl-mh"},
    {NeuralTag::MtlXs, "mtl-xs"},
}};

// Shortest text that parses back to the same value.
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::size_t parse_count(std::string_view key, std::string_view value) {
  const auto v = detail::to_int<std::size_t>(detail::trim(value));
  if (!v) throw ConfigError("config key " + std::string(key) + ": expected a count, got '" + std::string(value) + "'");
  return *v;
}

double parse_real(std::string_view key, std::string_view value) {
  const auto v = detail::to_double(detail::trim(value));
  if (!v) throw ConfigError("config key " + std::string(key) + ": expected a number, got '" + std::string(value) + "'");
  return *v;
}

bool parse_flag(std::string_view key, std::string_view value) {
  const auto v = detail::trim(value);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("config key " + std::string(key) + ": expected true/false, got '" + std::string(value) + "'");
}

}  // namespace

std::string_view to_string(NeuralTag tag) {
  for (auto [t, name] : kTags)
    if (t == tag) return name;
  return "emo-nn-base";
}

std::optional<NeuralTag> parse_neural_tag(std::string_view tag) {
  for (auto [t, name] : kTags)
    if (name == tag) return t;
  return std::nullopt;
}

std::string_view to_string(Profile p) { return p == Profile::Reman ? "reman" : "tec"; }

Profile parse_profile(std::string_view s) {
  if (s == "reman") return Profile::Reman;
  if (s == "tec") return Profile::Tec;
  throw ConfigError("unknown profile '" + std::string(s) + "' (expected reman or tec)");
}

ModelConfig default_config(NeuralTag tag, Profile profile) {
  ModelConfig c;
  const bool reman = profile == Profile::Reman;
  // Columns: units, filters, fc cpm, fc emo, fc comb, loss emo, loss cpm,
  // task emo, task cpm, minibatch.
  switch (tag) {
    case NeuralTag::CpmNnBase:
      c.bilstm_units = 24;
      c.cnn_filters = reman ? 10 : 32;
      c.fc_neurons_cpm = reman ? 128 : 32;
      c.loss_weight_cpm = reman ? 1.5 : 1.0;
      c.task_weight_cpm = 1.0;
      c.minibatch_size = reman ? 60 : 40;
      break;
    case NeuralTag::EmoNnBase:
      c.bilstm_units = 24;
      c.cnn_filters = reman ? 10 : 32;
      c.fc_neurons_emo = 128;
      c.loss_weight_emo = reman ? 4.0 : 1.0;
      c.task_weight_emo = 1.0;
      c.minibatch_size = reman ? 50 : 80;
      break;
    case NeuralTag::EmoCpmNnGold:
      c.bilstm_units = 24;
      c.cnn_filters = reman ? 16 : 32;
      c.fc_neurons_cpm = reman ? 96 : 0;
      c.fc_neurons_emo = 128;
      c.fc_neurons_combined = reman ? 128 : 256;
      c.loss_weight_emo = reman ? 6.0 : 1.0;
      c.task_weight_emo = 1.0;
      c.minibatch_size = reman ? 50 : 80;
      break;
    case NeuralTag::EmoCpmNnPred:
      c.bilstm_units = 24;
      c.cnn_filters = reman ? 16 : 32;
      c.fc_neurons_cpm = 64;
      c.fc_neurons_emo = 128;
      c.fc_neurons_combined = reman ? 96 : 256;
      c.loss_weight_emo = reman ? 4.0 : 1.0;
      c.task_weight_emo = 1.0;
      c.minibatch_size = reman ? 50 : 80;
      break;
    case NeuralTag::MtlXs:
      c.bilstm_units = 32;
      c.bilstm_units_cpm = 24;
      c.cnn_filters = reman ? 12 : 24;
      c.cnn_filters_cpm = reman ? 10 : 24;
      c.fc_neurons_cpm = 128;
      c.fc_neurons_emo = 128;
      c.loss_weight_emo = reman ? 7.8 : 1.0;
      c.loss_weight_cpm = reman ? 1.5 : 1.0;
      c.task_weight_emo = 0.75;
      c.task_weight_cpm = 0.5;
      c.minibatch_size = reman ? 25 : 80;
      break;
    case NeuralTag::MtlMh:
      c.bilstm_units = 24;
      c.cnn_filters = reman ? 16 : 32;
      c.fc_neurons_cpm = reman ? 128 : 32;
      c.fc_neurons_emo = 128;
      c.loss_weight_emo = reman ? 7.8 : 1.0;
      c.loss_weight_cpm = reman ? 1.5 : 1.0;
      c.task_weight_emo = reman ? 0.75 : 0.5;
      c.task_weight_cpm = reman ? 0.35 : 0.5;
      c.minibatch_size = reman ? 25 : 80;
      break;
  }
  if (tag != NeuralTag::MtlXs) {
    c.bilstm_units_cpm = c.bilstm_units;
    c.cnn_filters_cpm = c.cnn_filters;
  }
  return c;
}

void ModelConfig::validate(NeuralTag tag) const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid model config: " + what);
  };
  need(bilstm_units >= 1 && bilstm_units_cpm >= 1, "bilstm_units must be >= 1");
  need(cnn_filters >= 1 && cnn_filters_cpm >= 1, "cnn_filters must be >= 1");
  need(!kernel_sizes.empty(), "kernel_sizes must not be empty");
  for (auto k : kernel_sizes) need(k >= 1, "kernel sizes must be >= 1");
  need(fc_neurons_emo >= 1, "fc_neurons_emo must be >= 1");
  if (tag == NeuralTag::CpmNnBase || tag == NeuralTag::MtlMh || tag == NeuralTag::MtlXs ||
      tag == NeuralTag::EmoCpmNnPred)
    need(fc_neurons_cpm >= 1, "fc_neurons_cpm must be >= 1");
  if (tag == NeuralTag::EmoCpmNnGold || tag == NeuralTag::EmoCpmNnPred)
    need(fc_neurons_combined >= 1, "fc_neurons_combined must be >= 1");
  need(loss_weight_emo > 0 && loss_weight_cpm > 0, "loss weights must be > 0");
  // A zero task weight switches that task's loss off entirely.
  need(task_weight_emo >= 0 && task_weight_cpm >= 0, "task weights must be >= 0");
  need(minibatch_size >= 1, "minibatch_size must be >= 1");
  need(dropout_rate >= 0 && dropout_rate < 1, "dropout_rate must be in [0,1)");
  need(learning_rate > 0, "learning_rate must be > 0");
  need(dev_fraction >= 0 && dev_fraction < 1, "dev_fraction must be in [0,1)");
}

std::vector<std::pair<std::string, std::string>> config_items(const ModelConfig& c) {
  std::string kernels;
  for (std::size_t i = 0; i < c.kernel_sizes.size(); ++i)
    kernels += (i ? "," : "") + std::to_string(c.kernel_sizes[i]);
  return {
      {"bilstm_units", std::to_string(c.bilstm_units)},
      {"bilstm_units_cpm", std::to_string(c.bilstm_units_cpm)},
      {"cnn_filters", std::to_string(c.cnn_filters)},
      {"cnn_filters_cpm", std::to_string(c.cnn_filters_cpm)},
      {"fc_neurons_cpm", std::to_string(c.fc_neurons_cpm)},
      {"fc_neurons_emo", std::to_string(c.fc_neurons_emo)},
      {"fc_neurons_combined", std::to_string(c.fc_neurons_combined)},
      {"loss_weight_emo", format_double(c.loss_weight_emo)},
      {"loss_weight_cpm", format_double(c.loss_weight_cpm)},
      {"task_weight_emo", format_double(c.task_weight_emo)},
      {"task_weight_cpm", format_double(c.task_weight_cpm)},
      {"minibatch_size", std::to_string(c.minibatch_size)},
      {"kernel_sizes", kernels},
      {"dropout_rate", format_double(c.dropout_rate)},
      {"learning_rate", format_double(c.learning_rate)},
      {"epochs", std::to_string(c.epochs)},
      {"seed", std::to_string(c.seed)},
      {"per_channel_alpha", c.per_channel_alpha ? "true" : "false"},
      {"freeze_alpha", c.freeze_alpha ? "true" : "false"},
      {"dev_fraction", format_double(c.dev_fraction)},
  };
}

bool apply_config_item(ModelConfig& c, std::string_view key, std::string_view value) {
  if (key == "bilstm_units") c.bilstm_units = parse_count(key, value);
  else if (key == "bilstm_units_cpm") c.bilstm_units_cpm = parse_count(key, value);
  else if (key == "cnn_filters") c.cnn_filters = parse_count(key, value);
  else if (key == "cnn_filters_cpm") c.cnn_filters_cpm = parse_count(key, value);
  else if (key == "fc_neurons_cpm") c.fc_neurons_cpm = parse_count(key, value);
  else if (key == "fc_neurons_emo") c.fc_neurons_emo = parse_count(key, value);
  else if (key == "fc_neurons_combined") c.fc_neurons_combined = parse_count(key, value);
  else if (key == "loss_weight_emo") c.loss_weight_emo = parse_real(key, value);
  else if (key == "loss_weight_cpm") c.loss_weight_cpm = parse_real(key, value);
  else if (key == "task_weight_emo") c.task_weight_emo = parse_real(key, value);
  else if (key == "task_weight_cpm") c.task_weight_cpm = parse_real(key, value);
  else if (key == "minibatch_size") c.minibatch_size = parse_count(key, value);
  else if (key == "dropout_rate") c.dropout_rate = parse_real(key, value);
  else if (key == "learning_rate") c.learning_rate = parse_real(key, value);
  else if (key == "epochs") c.epochs = parse_count(key, value);
  else if (key == "seed") c.seed = parse_count(key, value);
  else if (key == "per_channel_alpha") c.per_channel_alpha = parse_flag(key, value);
  else if (key == "freeze_alpha") c.freeze_alpha = parse_flag(key, value);
  else if (key == "dev_fraction") c.dev_fraction = parse_real(key, value);
  else if (key == "kernel_sizes") {
    std::vector<std::size_t> ks;
    std::string_view rest = value;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      ks.push_back(parse_count(key, rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    c.kernel_sizes = std::move(ks);
  } else {
    return false;
  }
  return true;
}

}  // namespace emocpm::neural
