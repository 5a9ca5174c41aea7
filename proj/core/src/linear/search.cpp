#include "emocpm/linear/search.hpp"

#include <iomanip>
#include <ostream>

#include "emocpm/data/metrics.hpp"

namespace emocpm::linear {

const CombinationScore* ComponentSearch::find(const FeatureCombination& c) const {
  for (const auto& s : scores)
    if (s.combination == c) return &s;
  return nullptr;
}

namespace {

std::vector<std::uint8_t> component_column(const data::Corpus& c, std::size_t component) {
  std::vector<std::uint8_t> out;
  out.reserve(c.size());
  for (const auto& inst : c.instances) out.push_back(inst.cpm[component]);
  return out;
}

bool available(const FeatureCombination& c, const FeatureResources& r, std::size_t component) {
  if (c.dictionaries && (!r.lexicons || r.lexicons->empty())) return false;
  if (c.pos_tags && !r.pos) return false;
  if (c.word_embeddings && !r.embeddings) return false;
  if (c.appraisal && (!r.appraisal || component != data::kCognitiveAppraisal)) return false;
  return true;
}

}  // namespace

ComponentSearch feature_combination_search(const data::Corpus& train, const data::Corpus& dev,
                                           std::size_t component, const FeatureResources& resources,
                                           const MaxEntConfig& config) {
  const auto ptrain = prepare(train), pdev = prepare(dev);
  const auto tfidf = text::TfIdfModel::fit(ptrain.stems);
  const auto y_train = component_column(train, component);
  const auto y_dev = component_column(dev, component);
  const std::string label(data::kComponentNames.at(component));

  ComponentSearch result;
  result.component = component;
  if (!resources.lexicons || resources.lexicons->empty()) result.unavailable.emplace_back("dict");
  if (!resources.pos) result.unavailable.emplace_back("pos");
  if (!resources.embeddings) result.unavailable.emplace_back("emb");
  if (component == data::kCognitiveAppraisal && !resources.appraisal)
    result.unavailable.emplace_back("appraisal");

  bool have_best = false;
  for (const auto& combo : FeatureCombination::all(component == data::kCognitiveAppraisal)) {
    if (!available(combo, resources, component)) continue;
    FeatureBuilder builder(tfidf, combo, resources, component);
    const auto x_train = builder.build_all(ptrain);
    const auto x_dev = builder.build_all(pdev);
    const auto model = MaxEntModel::train_binary(x_train, y_train, builder.dimension(), label, config);

    std::vector<data::LabeledItem> gold, pred;
    for (std::size_t i = 0; i < x_dev.size(); ++i) {
      gold.push_back({pdev.ids[i], y_dev[i] ? data::LabelSet{0} : data::LabelSet{}});
      pred.push_back({pdev.ids[i], model.predict(x_dev[i]) ? data::LabelSet{0} : data::LabelSet{}});
    }
    const auto report = data::evaluate(gold, pred, {label});
    const auto& m = report.classes[0];
    result.scores.push_back({combo, m.precision, m.recall, m.f1});
    // Candidates arrive fewest blocks first, so a strict improvement is
    // needed to displace an earlier one.
    if (!have_best || m.f1 > result.best_f1) {
      result.best = combo;
      result.best_f1 = m.f1;
      have_best = true;
    }
  }
  return result;
}

void write_ablation_tsv(std::ostream& out, const std::vector<ComponentSearch>& searches) {
  out << "component\tbow\t+dict\t+pos\t+emb\t+appraisal\tbest\tbest_f1\n";
  out << std::fixed << std::setprecision(4);
  auto cell = [&](const ComponentSearch& s, const FeatureCombination& c) {
    out << '\t';
    if (const auto* score = s.find(c)) {
      out << score->dev_f1;
    } else {
      out << "--";
    }
  };
  for (const auto& s : searches) {
    out << data::kComponentNames.at(s.component);
    FeatureCombination bow, dict, pos, emb, appraisal;
    dict.dictionaries = true;
    pos.pos_tags = true;
    emb.word_embeddings = true;
    appraisal.appraisal = true;
    for (const auto& c : {bow, dict, pos, emb, appraisal}) cell(s, c);
    out << '\t' << s.best.name() << '\t' << s.best_f1 << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

}  // namespace emocpm::linear
