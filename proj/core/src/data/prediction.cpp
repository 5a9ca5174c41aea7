#include "emocpm/data/prediction.hpp"

#include <ostream>

#include <json.hpp>

#include "emocpm/error.hpp"

namespace emocpm::data {

LabelSet decide_labels(std::span<const double> scores, TaskMode mode,
                       std::optional<std::size_t> neutral_index, double threshold) {
  if (scores.empty()) return {};
  if (mode == TaskMode::SingleLabel) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
      if (scores[i] > scores[best]) best = i;
    return {best};
  }
  LabelSet out;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] > threshold) out.push_back(i);
  if (out.empty() && neutral_index) out.push_back(*neutral_index);
  return out;
}

CpmFlags decide_components(std::span<const double> scores, double threshold) {
  if (scores.size() != kNumComponents)
    throw ShapeError("component scores need " + std::to_string(kNumComponents) + " entries");
  CpmFlags out{};
  for (std::size_t c = 0; c < kNumComponents; ++c) out[c] = scores[c] > threshold ? 1 : 0;
  return out;
}

void write_predictions(std::ostream& out, const PredictionSet& predictions) {
  for (const auto& p : predictions.items) {
    nlohmann::ordered_json j;
    j["id"] = p.id;
    if (predictions.emotion_head) {
      std::vector<std::string> names;
      for (auto l : p.emotions) names.push_back(predictions.inventory.at(l));
      j["emotions"] = names;
      nlohmann::ordered_json scores = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < p.emotion_scores.size(); ++i)
        scores[predictions.inventory.at(i)] = p.emotion_scores[i];
      j["emotion_scores"] = scores;
    }
    if (p.cpm) {
      j["cpm"] = std::vector<int>(p.cpm->begin(), p.cpm->end());
      if (!p.cpm_scores.empty()) j["cpm_scores"] = p.cpm_scores;
    }
    out << j.dump() << '\n';
  }
}

EvaluationReport evaluate_predictions(const Corpus& gold, const PredictionSet& predictions) {
  if (gold.size() != predictions.items.size()) {
    throw DataError("evaluation: " + std::to_string(gold.size()) + " gold instances but " +
                    std::to_string(predictions.items.size()) + " predictions");
  }
  EvaluationReport report;
  if (predictions.emotion_head) {
    std::vector<LabeledItem> g, p;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      g.push_back({gold.instances[i].id, gold.emotion_labels(gold.instances[i])});
      p.push_back({predictions.items[i].id, predictions.items[i].emotions});
    }
    report.emotions = evaluate(g, p, predictions.inventory);
  }
  if (predictions.cpm_head) {
    std::vector<LabeledItem> g, p;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      const auto& pred = predictions.items[i];
      if (!pred.cpm) throw DataError("evaluation: missing component prediction for " + pred.id);
      g.push_back({gold.instances[i].id, component_labels(gold.instances[i].cpm)});
      p.push_back({pred.id, component_labels(*pred.cpm)});
    }
    report.components = evaluate(g, p, component_inventory());
  }
  return report;
}

}  // namespace emocpm::data
