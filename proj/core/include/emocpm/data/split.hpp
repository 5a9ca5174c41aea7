#pragma once

#include <cstdint>
#include <vector>

#include "emocpm/data/corpus.hpp"

namespace emocpm::data {

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Seeded shuffle, then the test side takes floor((1 - ratio)·N) instances.
SplitIndices split_indices(std::size_t n, double train_ratio, std::uint64_t seed);
std::pair<Corpus, Corpus> split_train_test(const Corpus& corpus, double train_ratio,
                                           std::uint64_t seed);

// Fold id per instance. Folds are balanced: the first N mod k folds hold one
// extra instance.
std::vector<std::size_t> kfold(std::size_t n, std::size_t k, std::uint64_t seed);
// Indices belonging to fold `fold` and to all other folds.
SplitIndices fold_split(const std::vector<std::size_t>& assignment, std::size_t fold);

}  // namespace emocpm::data
