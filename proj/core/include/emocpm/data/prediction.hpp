#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emocpm/data/corpus.hpp"
#include "emocpm/data/metrics.hpp"

namespace emocpm::data {

struct InstancePrediction {
  std::string id;
  LabelSet emotions;
  std::vector<double> emotion_scores;  // empty when the model has no emotion head
  std::optional<CpmFlags> cpm;
  std::vector<double> cpm_scores;
};

struct PredictionSet {
  std::vector<std::string> inventory;
  TaskMode mode = TaskMode::SingleLabel;
  bool emotion_head = false;
  bool cpm_head = false;
  std::vector<InstancePrediction> items;
};

// Single-label: argmax, ties to the earlier class. Multi-label: every score
// above the threshold; an empty result becomes {neutral_index} when given.
LabelSet decide_labels(std::span<const double> scores, TaskMode mode,
                       std::optional<std::size_t> neutral_index, double threshold = 0.5);

CpmFlags decide_components(std::span<const double> scores, double threshold = 0.5);

// One JSON object per line with id, emotions, scores and, when present,
// cpm flags and scores.
void write_predictions(std::ostream& out, const PredictionSet& predictions);

struct EvaluationReport {
  std::optional<MetricsReport> emotions;
  std::optional<MetricsReport> components;
};

// Scores every head the predictions carry against the corpus gold labels.
EvaluationReport evaluate_predictions(const Corpus& gold, const PredictionSet& predictions);

}  // namespace emocpm::data
