#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emocpm/data/corpus.hpp"
#include "emocpm/data/prediction.hpp"
#include "emocpm/linear/features.hpp"
#include "emocpm/linear/maxent.hpp"
#include "emocpm/linear/search.hpp"

namespace emocpm::linear {

enum class LinearTag { EmoMeBase, CpmMeBase, CpmMeAdv, EmoCpmMePred, EmoCpmMeGold };

std::string_view to_string(LinearTag tag);
std::optional<LinearTag> parse_linear_tag(std::string_view tag);

struct LinearConfig {
  MaxEntConfig maxent;
  // Share of the training data held out for the feature search.
  double dev_fraction = 0.1;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  // Preset block combinations per component; unset entries are searched.
  std::array<std::optional<FeatureCombination>, data::kNumComponents> combinations{};
};

struct ComponentClassifier {
  FeatureCombination combination;
  MaxEntModel model;
};

// A fitted maximum-entropy system for one of the five linear model tags.
//   emo-me-base      emotions from TF-IDF
//   cpm-me-base      five component models from TF-IDF
//   cpm-me-adv       five component models with searched feature blocks
//   emo-cpm-me-gold  emotions from TF-IDF plus gold component flags
//   emo-cpm-me-pred  emotions from TF-IDF plus flags predicted by cpm-me-adv
// Single-label corpora get a multinomial emotion model, multi-label corpora
// one binary model per label.
class LinearPipeline {
 public:
  static LinearPipeline train(LinearTag tag, const data::Corpus& train,
                              const FeatureResources& resources, const LinearConfig& config = {});

  // Lexicons stored in the model are used when `resources` has none.
  data::PredictionSet predict(const data::Corpus& corpus, const FeatureResources& resources) const;

  LinearTag tag() const noexcept { return tag_; }
  data::TaskMode mode() const noexcept { return mode_; }
  const std::vector<std::string>& inventory() const noexcept { return inventory_; }
  const text::TfIdfModel& tfidf() const noexcept { return tfidf_; }
  const std::vector<ComponentClassifier>& components() const noexcept { return components_; }
  const std::vector<ComponentSearch>& searches() const noexcept { return searches_; }
  bool has_emotion_head() const noexcept { return tag_ != LinearTag::CpmMeBase && tag_ != LinearTag::CpmMeAdv; }
  bool has_cpm_head() const noexcept { return !components_.empty(); }
  // Warnings collected during training, e.g. degenerate single-class fits.
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  std::string to_json() const;
  static LinearPipeline from_json(std::string_view text);

 private:
  std::vector<std::vector<double>> component_scores(const PreparedCorpus& prepared,
                                                    const FeatureResources& resources) const;

  LinearTag tag_ = LinearTag::EmoMeBase;
  data::TaskMode mode_ = data::TaskMode::SingleLabel;
  std::vector<std::string> inventory_;
  text::TfIdfModel tfidf_;
  std::vector<text::DictionaryLexicon> lexicons_;
  std::optional<MaxEntModel> emotion_multinomial_;
  std::optional<OneVsRestEnsemble> emotion_ovr_;
  std::vector<ComponentClassifier> components_;
  std::vector<ComponentSearch> searches_;
  std::vector<std::string> warnings_;
};

}  // namespace emocpm::linear
