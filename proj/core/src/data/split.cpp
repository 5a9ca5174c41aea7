#include "emocpm/data/split.hpp"

#include <cmath>
#include <numeric>

#include "emocpm/error.hpp"
#include "emocpm/random.hpp"

namespace emocpm::data {

SplitIndices split_indices(std::size_t n, double train_ratio, std::uint64_t seed) {
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) {
    throw ConfigError("train ratio must be in (0,1), got " + std::to_string(train_ratio));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  // The small guard keeps exact products such as 0.1·1000 from flooring to 99.
  const auto n_test = static_cast<std::size_t>(
      std::floor((1.0 - train_ratio) * static_cast<double>(n) + 1e-9));
  SplitIndices out;
  out.test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  out.train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
  return out;
}

std::pair<Corpus, Corpus> split_train_test(const Corpus& corpus, double train_ratio,
                                           std::uint64_t seed) {
  const auto idx = split_indices(corpus.size(), train_ratio, seed);
  return {corpus.subset(idx.train), corpus.subset(idx.test)};
}

std::vector<std::size_t> kfold(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("k-fold needs k >= 2, got " + std::to_string(k));
  if (k > n) {
    throw ConfigError("k-fold needs k <= N, got k=" + std::to_string(k) + " N=" + std::to_string(n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<std::size_t> fold(n);
  const std::size_t base = n / k, extra = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i) fold[order[pos++]] = f;
  }
  return fold;
}

SplitIndices fold_split(const std::vector<std::size_t>& assignment, std::size_t fold) {
  SplitIndices out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    (assignment[i] == fold ? out.test : out.train).push_back(i);
  return out;
}

}  // namespace emocpm::data
