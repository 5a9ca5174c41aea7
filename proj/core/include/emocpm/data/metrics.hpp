#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "emocpm/data/corpus.hpp"

namespace emocpm::data {

struct ClassMetrics {
  std::string label;
  std::size_t tp = 0, fp = 0, fn = 0;
  std::size_t support = 0;  // gold positives
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

struct MetricsReport {
  std::vector<ClassMetrics> classes;
  double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
  double micro_precision = 0.0, micro_recall = 0.0, micro_f1 = 0.0;
};

struct LabeledItem {
  std::string id;
  LabelSet labels;
};

// Per-class TP/FP/FN over label sets (one-vs-rest for single-label data).
// Undefined ratios are 0. Macro averages are unweighted over the inventory;
// micro averages pool the counts. Mismatched ids are a DataError.
MetricsReport evaluate(const std::vector<LabeledItem>& gold,
                       const std::vector<LabeledItem>& predicted,
                       const std::vector<std::string>& inventory);

// "class\tP\tR\tF1\tsupport" rows plus macro and micro rows.
void write_metrics_tsv(std::ostream& out, const MetricsReport& report);
std::string metrics_json(const MetricsReport& report);

double f1_score(double precision, double recall);

}  // namespace emocpm::data
