#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

namespace emocpm::text {

struct DictionaryLexicon {
  std::string component;
  std::set<std::string> entries;  // stemmed
};

// One term per line, '#' starts a comment. Terms are lowercased and stemmed
// on load. An empty lexicon is a ParseError.
DictionaryLexicon load_lexicon(const std::filesystem::path& path, std::string component);

// Loads <dir>/<component>.txt for each of the five component names.
std::vector<DictionaryLexicon> load_lexicon_dir(const std::filesystem::path& dir);

// For each lexicon: number of tokens found in it, then a 0/1 presence flag.
std::vector<double> dictionary_features(const std::vector<std::string>& stems,
                                        const std::vector<DictionaryLexicon>& lexicons);

// Default search location of the bundled lexicons.
std::filesystem::path default_lexicon_dir();

}  // namespace emocpm::text
