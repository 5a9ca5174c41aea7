#pragma once

#include <string>
#include <vector>

namespace emocpm::text {

// Unigrams followed by contiguous bigrams; bigram parts are joined by one
// space, which never occurs inside a token.
std::vector<std::string> extract_ngrams(const std::vector<std::string>& tokens);

inline std::string bigram(const std::string& a, const std::string& b) { return a + ' ' + b; }

}  // namespace emocpm::text
