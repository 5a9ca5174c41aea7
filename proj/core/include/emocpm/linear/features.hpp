#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "emocpm/data/corpus.hpp"
#include "emocpm/sparse.hpp"
#include "emocpm/text/embeddings.hpp"
#include "emocpm/text/lexicon.hpp"
#include "emocpm/text/tfidf.hpp"

namespace emocpm::linear {

// Auxiliary blocks on top of the always-on TF-IDF block.
struct FeatureCombination {
  bool dictionaries = false;
  bool pos_tags = false;
  bool word_embeddings = false;
  bool appraisal = false;  // cognitive appraisal only

  std::size_t count() const noexcept;
  // "bow", "bow+dict+emb", ...
  std::string name() const;
  static FeatureCombination parse(std::string_view name);
  // Every subset of the permitted flags, smallest first.
  static std::vector<FeatureCombination> all(bool allow_appraisal);

  friend bool operator==(const FeatureCombination&, const FeatureCombination&) = default;
};

// "id<TAB>tag tag ..." per line.
struct PosSidecar {
  std::vector<std::string> tagset;  // sorted union over the file
  std::unordered_map<std::string, std::vector<std::string>> tags;
};
PosSidecar load_pos_sidecar(const std::filesystem::path& path);
PosSidecar parse_pos_sidecar(std::istream& in, const std::string& source_name);

// "id<TAB>v1 v2 ..." per line, fixed length.
struct AppraisalSidecar {
  std::size_t dimension = 0;
  std::unordered_map<std::string, std::vector<double>> values;
};
AppraisalSidecar load_appraisal_sidecar(const std::filesystem::path& path);
AppraisalSidecar parse_appraisal_sidecar(std::istream& in, const std::string& source_name);

// Borrowed resources; null means unavailable.
struct FeatureResources {
  const std::vector<text::DictionaryLexicon>* lexicons = nullptr;
  const PosSidecar* pos = nullptr;
  const text::EmbeddingTable* embeddings = nullptr;
  const AppraisalSidecar* appraisal = nullptr;
};

struct FeatureBlock {
  std::string name;
  std::size_t offset = 0;
  std::size_t length = 0;
};

// Tokenised and stemmed texts, computed once per corpus.
struct PreparedCorpus {
  std::vector<std::string> ids;
  std::vector<std::vector<std::string>> tokens;  // lowercased tokens
  std::vector<std::vector<std::string>> stems;
};
PreparedCorpus prepare(const data::Corpus& corpus);

// Concatenates TF-IDF with the enabled blocks. Construction checks that the
// resources for every enabled flag exist (ResourceError) and that the
// appraisal block is only used for the cognitive-appraisal component
// (ConfigError).
class FeatureBuilder {
 public:
  FeatureBuilder(const text::TfIdfModel& tfidf, FeatureCombination combination,
                 const FeatureResources& resources, std::size_t component);

  SparseVector build(const std::string& id, const std::vector<std::string>& tokens,
                     const std::vector<std::string>& stems) const;
  std::vector<SparseVector> build_all(const PreparedCorpus& corpus) const;

  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<FeatureBlock>& blocks() const noexcept { return blocks_; }
  const FeatureCombination& combination() const noexcept { return combination_; }

 private:
  const text::TfIdfModel* tfidf_;
  FeatureCombination combination_;
  FeatureResources resources_;
  std::vector<FeatureBlock> blocks_;
  std::size_t dimension_ = 0;
};

// Appends five 0/1 component dimensions after `base_dimension`.
SparseVector stack_component_features(const SparseVector& base, std::size_t base_dimension,
                                      std::span<const std::uint8_t> cpm);

}  // namespace emocpm::linear
