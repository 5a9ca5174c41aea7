#include "emocpm/text/ngrams.hpp"

namespace emocpm::text {

std::vector<std::string> extract_ngrams(const std::vector<std::string>& tokens) {
  std::vector<std::string> out(tokens.begin(), tokens.end());
  for (std::size_t i = 1; i < tokens.size(); ++i) out.push_back(bigram(tokens[i - 1], tokens[i]));
  return out;
}

}  // namespace emocpm::text
