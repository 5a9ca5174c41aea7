#pragma once

#include <string>
#include <string_view>

#include "emocpm/text/tokenizer.hpp"

namespace emocpm::text {

// Porter stemmer, following Martin Porter's reference implementation
// (including its length-2 guard and the bli/logi step-2 rules).
std::string porter_stem(std::string_view word);

TokenSequence stem(const TokenSequence& seq);

}  // namespace emocpm::text
