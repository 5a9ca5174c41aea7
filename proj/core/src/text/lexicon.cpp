#include "emocpm/text/lexicon.hpp"

#include <cstdlib>
#include <fstream>

#include "emocpm/data/corpus.hpp"
#include "emocpm/error.hpp"
#include "emocpm/text/porter.hpp"
#include "emocpm/text/tokenizer.hpp"

#ifndef EMOCPM_DEFAULT_LEXICON_DIR
#define EMOCPM_DEFAULT_LEXICON_DIR "data/lexicons"
#endif

namespace emocpm::text {

DictionaryLexicon load_lexicon(const std::filesystem::path& path, std::string component) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot open lexicon " + path.string());
  DictionaryLexicon lex{std::move(component), {}};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto tokens = tokenize(line).tokens;
    if (tokens.empty()) continue;
    if (tokens.size() != 1) {
      throw ParseError(path.string(), lineno, "expected one term per line, got '" + line + "'");
    }
    lex.entries.insert(porter_stem(tokens.front()));
  }
  if (lex.entries.empty()) throw ParseError(path.string(), lineno, "lexicon has no entries");
  return lex;
}

std::vector<DictionaryLexicon> load_lexicon_dir(const std::filesystem::path& dir) {
  std::vector<DictionaryLexicon> out;
  for (std::string_view name : data::kComponentNames) {
    const auto file = dir / (std::string(name) + ".txt");
    if (!std::filesystem::exists(file)) throw ResourceError("missing lexicon file " + file.string());
    out.push_back(load_lexicon(file, std::string(name)));
  }
  return out;
}

std::vector<double> dictionary_features(const std::vector<std::string>& stems,
                                        const std::vector<DictionaryLexicon>& lexicons) {
  std::vector<double> out;
  out.reserve(2 * lexicons.size());
  for (const auto& lex : lexicons) {
    double count = 0.0;
    for (const auto& s : stems)
      if (lex.entries.contains(s)) count += 1.0;
    out.push_back(count);
    out.push_back(count > 0.0 ? 1.0 : 0.0);
  }
  return out;
}

std::filesystem::path default_lexicon_dir() {
  if (const char* env = std::getenv("EMOCPM_LEXICON_DIR")) return env;
  return EMOCPM_DEFAULT_LEXICON_DIR;
}

}  // namespace emocpm::text
