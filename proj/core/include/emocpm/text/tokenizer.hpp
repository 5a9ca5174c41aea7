#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace emocpm::text {

struct TokenSequence {
  std::vector<std::string> tokens;  // lowercase, never empty strings
  std::string source_instance_id;
};

// Whitespace/punctuation split, ASCII-lowercased. @mentions, #hashtags,
// URLs, and common emoticons survive as single tokens; every other
// punctuation character becomes its own token. Bytes >= 0x80 are treated as
// word characters so UTF-8 letters stay inside words.
TokenSequence tokenize(std::string_view text, std::string source_instance_id = {});

}  // namespace emocpm::text
