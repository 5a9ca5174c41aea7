#include "emocpm/linear/features.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>

#include "emocpm/detail/parse.hpp"
#include "emocpm/error.hpp"
#include "emocpm/text/porter.hpp"
#include "emocpm/text/tokenizer.hpp"

namespace emocpm::linear {

std::size_t FeatureCombination::count() const noexcept {
  return std::size_t{dictionaries} + pos_tags + word_embeddings + appraisal;
}

std::string FeatureCombination::name() const {
  std::string out = "bow";
  if (dictionaries) out += "+dict";
  if (pos_tags) out += "+pos";
  if (word_embeddings) out += "+emb";
  if (appraisal) out += "+appraisal";
  return out;
}

FeatureCombination FeatureCombination::parse(std::string_view name) {
  FeatureCombination c;
  std::size_t start = 0;
  bool first = true;
  while (start <= name.size()) {
    const auto end = std::min(name.find('+', start), name.size());
    const auto part = name.substr(start, end - start);
    if (part == "bow" && first) {
    } else if (part == "dict") {
      c.dictionaries = true;
    } else if (part == "pos") {
      c.pos_tags = true;
    } else if (part == "emb") {
      c.word_embeddings = true;
    } else if (part == "appraisal") {
      c.appraisal = true;
    } else {
      throw ConfigError("unknown feature block '" + std::string(part) + "' in '" +
                        std::string(name) + "'");
    }
    first = false;
    start = end + 1;
  }
  return c;
}

std::vector<FeatureCombination> FeatureCombination::all(bool allow_appraisal) {
  const unsigned bits = allow_appraisal ? 4 : 3;
  std::vector<FeatureCombination> out;
  for (unsigned mask = 0; mask < (1u << bits); ++mask) {
    FeatureCombination c;
    c.dictionaries = mask & 1;
    c.pos_tags = mask & 2;
    c.word_embeddings = mask & 4;
    c.appraisal = mask & 8;
    out.push_back(c);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.count() < b.count(); });
  return out;
}

PosSidecar parse_pos_sidecar(std::istream& in, const std::string& source_name) {
  PosSidecar out;
  std::set<std::string> tagset;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(source_name, lineno, "expected id<TAB>tags");
    const std::string id(detail::trim(line.substr(0, tab)));
    auto tags = detail::split_ws(line.substr(tab + 1));
    std::vector<std::string> owned(tags.begin(), tags.end());
    tagset.insert(owned.begin(), owned.end());
    if (!out.tags.emplace(id, std::move(owned)).second)
      throw ParseError(source_name, lineno, "duplicate id " + id);
  }
  out.tagset.assign(tagset.begin(), tagset.end());
  return out;
}

PosSidecar load_pos_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot open POS sidecar " + path.string());
  return parse_pos_sidecar(in, path.string());
}

AppraisalSidecar parse_appraisal_sidecar(std::istream& in, const std::string& source_name) {
  AppraisalSidecar out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(source_name, lineno, "expected id<TAB>values");
    const std::string id(detail::trim(line.substr(0, tab)));
    std::vector<double> values;
    for (auto field : detail::split_ws(line.substr(tab + 1))) {
      const auto v = detail::to_double(field);
      if (!v) throw ParseError(source_name, lineno, "bad number '" + std::string(field) + "'");
      values.push_back(*v);
    }
    if (values.empty()) throw ParseError(source_name, lineno, "no values");
    if (out.dimension == 0) out.dimension = values.size();
    if (values.size() != out.dimension) {
      throw ParseError(source_name, lineno,
                       "expected " + std::to_string(out.dimension) + " values, got " +
                           std::to_string(values.size()));
    }
    if (!out.values.emplace(id, std::move(values)).second)
      throw ParseError(source_name, lineno, "duplicate id " + id);
  }
  if (out.values.empty()) throw ParseError(source_name, lineno, "empty appraisal sidecar");
  return out;
}

AppraisalSidecar load_appraisal_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot open appraisal sidecar " + path.string());
  return parse_appraisal_sidecar(in, path.string());
}

PreparedCorpus prepare(const data::Corpus& corpus) {
  PreparedCorpus out;
  for (const auto& inst : corpus.instances) {
    auto seq = text::tokenize(inst.text, inst.id);
    out.stems.push_back(text::stem(seq).tokens);
    out.tokens.push_back(std::move(seq.tokens));
    out.ids.push_back(inst.id);
  }
  return out;
}

FeatureBuilder::FeatureBuilder(const text::TfIdfModel& tfidf, FeatureCombination combination,
                               const FeatureResources& resources, std::size_t component)
    : tfidf_(&tfidf), combination_(combination), resources_(resources) {
  if (!tfidf.fitted()) throw StateError("feature builder needs a fitted tf-idf model");
  if (combination.appraisal && component != data::kCognitiveAppraisal) {
    throw ConfigError("appraisal features are only available for cognitive_appraisal, not " +
                      std::string(component < data::kNumComponents ? data::kComponentNames[component]
                                                                   : "emotion") +
                      " models");
  }
  auto add = [&](std::string name, std::size_t length) {
    blocks_.push_back({std::move(name), dimension_, length});
    dimension_ += length;
  };
  add("tfidf", tfidf.dimension());
  if (combination.dictionaries) {
    if (!resources.lexicons || resources.lexicons->empty())
      throw ResourceError("dictionary features enabled but no lexicons loaded");
    add("dict", 2 * resources.lexicons->size());
  }
  if (combination.pos_tags) {
    if (!resources.pos) throw ResourceError("POS features enabled but no POS sidecar given");
    add("pos", resources.pos->tagset.size());
  }
  if (combination.word_embeddings) {
    if (!resources.embeddings)
      throw ResourceError("embedding features enabled but no embedding table given");
    add("emb", resources.embeddings->dimension);
  }
  if (combination.appraisal) {
    if (!resources.appraisal)
      throw ResourceError("appraisal features enabled but no appraisal sidecar given");
    add("appraisal", resources.appraisal->dimension);
  }
}

SparseVector FeatureBuilder::build(const std::string& id, const std::vector<std::string>& tokens,
                                   const std::vector<std::string>& stems) const {
  SparseVector v = tfidf_->transform(stems);
  for (const auto& block : blocks_) {
    if (block.name == "dict") {
      v.append_dense(block.offset, text::dictionary_features(stems, *resources_.lexicons));
    } else if (block.name == "pos") {
      const auto it = resources_.pos->tags.find(id);
      if (it == resources_.pos->tags.end()) throw LookupError("no POS tags for instance " + id);
      const auto& tagset = resources_.pos->tagset;
      std::vector<double> freq(tagset.size(), 0.0);
      for (const auto& t : it->second) {
        const auto pos = std::lower_bound(tagset.begin(), tagset.end(), t);
        if (pos != tagset.end() && *pos == t) freq[pos - tagset.begin()] += 1.0;
      }
      if (!it->second.empty())
        for (double& f : freq) f /= static_cast<double>(it->second.size());
      v.append_dense(block.offset, freq);
    } else if (block.name == "emb") {
      v.append_dense(block.offset, text::pooled_embedding_features(tokens, *resources_.embeddings));
    } else if (block.name == "appraisal") {
      const auto it = resources_.appraisal->values.find(id);
      if (it == resources_.appraisal->values.end())
        throw LookupError("no appraisal values for instance " + id);
      v.append_dense(block.offset, it->second);
    }
  }
  return v;
}

std::vector<SparseVector> FeatureBuilder::build_all(const PreparedCorpus& corpus) const {
  std::vector<SparseVector> out;
  out.reserve(corpus.ids.size());
  for (std::size_t i = 0; i < corpus.ids.size(); ++i)
    out.push_back(build(corpus.ids[i], corpus.tokens[i], corpus.stems[i]));
  return out;
}

SparseVector stack_component_features(const SparseVector& base, std::size_t base_dimension,
                                      std::span<const std::uint8_t> cpm) {
  if (cpm.size() != data::kNumComponents) {
    throw ShapeError("component stacking needs " + std::to_string(data::kNumComponents) +
                     " flags, got " + std::to_string(cpm.size()));
  }
  if (base.extent() > base_dimension) throw ShapeError("component stacking: base exceeds its dimension");
  std::vector<double> flags;
  for (auto f : cpm) {
    if (f > 1) throw DataError("component flags must be 0 or 1");
    flags.push_back(f);
  }
  SparseVector out = base;
  out.append_dense(base_dimension, flags);
  return out;
}

}  // namespace emocpm::linear
