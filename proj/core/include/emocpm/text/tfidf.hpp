#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "emocpm/sparse.hpp"

namespace emocpm::text {

// TF-IDF over unigrams and bigrams with raw term counts,
// idf = ln((1 + N) / (1 + df)) + 1, and L2-normalised rows.
class TfIdfModel {
 public:
  // Each document is an already stemmed token list.
  static TfIdfModel fit(const std::vector<std::vector<std::string>>& documents);

  // N-grams absent from the vocabulary are dropped. Throws StateError when
  // the model was never fitted.
  SparseVector transform(const std::vector<std::string>& tokens) const;

  bool fitted() const noexcept { return fitted_; }
  std::size_t dimension() const noexcept { return vocabulary_.size(); }
  std::size_t corpus_size() const noexcept { return corpus_size_; }
  const std::map<std::string, std::size_t>& vocabulary() const noexcept { return vocabulary_; }
  std::size_t document_frequency(const std::string& ngram) const;
  double idf(const std::string& ngram) const;

  // Rebuilds a fitted model from serialised parts (sorted vocabulary order).
  static TfIdfModel from_parts(std::vector<std::string> terms, std::vector<std::size_t> df,
                               std::size_t corpus_size);
  std::vector<std::string> terms() const;
  const std::vector<std::size_t>& df_by_index() const noexcept { return df_; }

 private:
  void finalize();

  bool fitted_ = false;
  std::size_t corpus_size_ = 0;
  std::map<std::string, std::size_t> vocabulary_;
  std::vector<std::size_t> df_;
  std::vector<double> idf_;
};

}  // namespace emocpm::text
