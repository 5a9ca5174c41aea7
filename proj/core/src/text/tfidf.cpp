#include "emocpm/text/tfidf.hpp"

#include <cmath>
#include <set>

#include "emocpm/error.hpp"
#include "emocpm/text/ngrams.hpp"

namespace emocpm::text {

TfIdfModel TfIdfModel::fit(const std::vector<std::vector<std::string>>& documents) {
  std::map<std::string, std::size_t> df;
  for (const auto& doc : documents) {
    const auto grams = extract_ngrams(doc);
    for (const auto& g : std::set<std::string>(grams.begin(), grams.end())) ++df[g];
  }
  TfIdfModel model;
  model.corpus_size_ = documents.size();
  std::size_t index = 0;
  for (const auto& [term, count] : df) {
    model.vocabulary_.emplace(term, index++);
    model.df_.push_back(count);
  }
  model.finalize();
  return model;
}

TfIdfModel TfIdfModel::from_parts(std::vector<std::string> terms, std::vector<std::size_t> df,
                                  std::size_t corpus_size) {
  if (terms.size() != df.size()) throw DataError("tf-idf: term and df counts differ");
  TfIdfModel model;
  model.corpus_size_ = corpus_size;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!model.vocabulary_.emplace(std::move(terms[i]), i).second)
      throw DataError("tf-idf: duplicate vocabulary term");
  }
  model.df_ = std::move(df);
  model.finalize();
  return model;
}

void TfIdfModel::finalize() {
  idf_.resize(df_.size());
  const double n = static_cast<double>(corpus_size_);
  for (std::size_t i = 0; i < df_.size(); ++i)
    idf_[i] = std::log((1.0 + n) / (1.0 + static_cast<double>(df_[i]))) + 1.0;
  fitted_ = true;
}

std::vector<std::string> TfIdfModel::terms() const {
  std::vector<std::string> out(vocabulary_.size());
  for (const auto& [term, idx] : vocabulary_) out[idx] = term;
  return out;
}

std::size_t TfIdfModel::document_frequency(const std::string& ngram) const {
  const auto it = vocabulary_.find(ngram);
  return it == vocabulary_.end() ? 0 : df_[it->second];
}

double TfIdfModel::idf(const std::string& ngram) const {
  const auto it = vocabulary_.find(ngram);
  if (it == vocabulary_.end()) throw LookupError("tf-idf: unknown n-gram '" + ngram + "'");
  return idf_[it->second];
}

SparseVector TfIdfModel::transform(const std::vector<std::string>& tokens) const {
  if (!fitted_) throw StateError("tf-idf transform called before fit");
  std::map<std::size_t, double> counts;
  for (const auto& g : extract_ngrams(tokens)) {
    const auto it = vocabulary_.find(g);
    if (it != vocabulary_.end()) counts[it->second] += 1.0;
  }
  SparseVector v;
  double norm = 0.0;
  for (const auto& [idx, tf] : counts) {
    const double w = tf * idf_[idx];
    v.entries.emplace_back(idx, w);
    norm += w * w;
  }
  norm = std::sqrt(norm);
  for (auto& [_, w] : v.entries) w /= norm;
  return v;
}

}  // namespace emocpm::text
