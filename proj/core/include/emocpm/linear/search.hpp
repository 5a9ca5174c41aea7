#pragma once

#include <iosfwd>
#include <vector>

#include "emocpm/data/corpus.hpp"
#include "emocpm/linear/features.hpp"
#include "emocpm/linear/maxent.hpp"

namespace emocpm::linear {

struct CombinationScore {
  FeatureCombination combination;
  double dev_precision = 0.0, dev_recall = 0.0, dev_f1 = 0.0;
};

struct ComponentSearch {
  std::size_t component = 0;
  FeatureCombination best;
  double best_f1 = 0.0;
  // Every evaluated subset, fewest blocks first.
  std::vector<CombinationScore> scores;
  // Blocks left out of the search because their resource is missing.
  std::vector<std::string> unavailable;

  const CombinationScore* find(const FeatureCombination& c) const;
};

// Binary component model per subset of the available blocks, scored by the
// component's F1 on `dev`. Ties go to the subset with fewer blocks, then to
// enumeration order. The TF-IDF block is fitted on `train` only.
ComponentSearch feature_combination_search(const data::Corpus& train, const data::Corpus& dev,
                                           std::size_t component, const FeatureResources& resources,
                                           const MaxEntConfig& config = {});

// One row per component: F1 with TF-IDF alone, with each single block added,
// then the selected combination.
void write_ablation_tsv(std::ostream& out, const std::vector<ComponentSearch>& searches);

}  // namespace emocpm::linear
