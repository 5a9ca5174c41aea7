#include "emocpm/text/tokenizer.hpp"

#include <algorithm>
#include <array>

namespace emocpm::text {
namespace {

// Longest candidates first so ":-)" wins over ":-".
constexpr std::array<std::string_view, 30> kEmoticons = {
    ">:-(", ">:(", ":'-(", ":'(", ":-)", ":-(", ":-d", ":-p", ":-/", ";-)", "^_^", "-_-",
    ":)",   ":(",  ":d",   ":p",  ";)",  ";d",  ":/",  ":|",  ":o",  ":]", ":[", ":*",
    "=)",   "=(",  "<3",   "^^",  "xd",  "d:"};

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string lowered(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), lower);
  return out;
}

bool is_boundary(std::string_view chunk, std::size_t pos) {
  return pos >= chunk.size() || !is_word_byte(static_cast<unsigned char>(chunk[pos]));
}

// Emoticon starting at pos. Those beginning with a letter must fill the
// whole whitespace-delimited chunk.
std::size_t emoticon_length(std::string_view chunk, std::size_t pos) {
  for (std::string_view e : kEmoticons) {
    if (chunk.size() - pos < e.size()) continue;
    if (lowered(chunk.substr(pos, e.size())) != e) continue;
    const bool letter_first = std::isalpha(static_cast<unsigned char>(e[0]));
    if (letter_first && (pos != 0 || e.size() != chunk.size())) continue;
    // "d"/"p"/"o" ending forms must not run into a following word.
    if (std::isalpha(static_cast<unsigned char>(e.back())) && !is_boundary(chunk, pos + e.size()))
      continue;
    return e.size();
  }
  return 0;
}

void split_chunk(std::string_view chunk, std::vector<std::string>& out) {
  if (chunk.starts_with("http://") || chunk.starts_with("https://") || chunk.starts_with("www.")) {
    out.push_back(lowered(chunk));
    return;
  }
  std::size_t i = 0;
  while (i < chunk.size()) {
    const auto c = static_cast<unsigned char>(chunk[i]);
    if (const std::size_t n = emoticon_length(chunk, i); n > 0) {
      out.push_back(lowered(chunk.substr(i, n)));
      i += n;
      continue;
    }
    if ((c == '@' || c == '#') && i + 1 < chunk.size() &&
        is_word_byte(static_cast<unsigned char>(chunk[i + 1]))) {
      std::size_t j = i + 1;
      while (j < chunk.size() && is_word_byte(static_cast<unsigned char>(chunk[j]))) ++j;
      out.push_back(lowered(chunk.substr(i, j - i)));
      i = j;
      continue;
    }
    if (is_word_byte(c)) {
      std::size_t j = i;
      while (j < chunk.size()) {
        const auto cj = static_cast<unsigned char>(chunk[j]);
        if (is_word_byte(cj)) {
          ++j;
        } else if (cj == '\'' && j + 1 < chunk.size() &&
                   std::isalpha(static_cast<unsigned char>(chunk[j + 1]))) {
          ++j;  // apostrophe inside a word: don't, it's
        } else {
          break;
        }
      }
      out.push_back(lowered(chunk.substr(i, j - i)));
      i = j;
      continue;
    }
    out.emplace_back(1, static_cast<char>(c));
    ++i;
  }
}

}  // namespace

TokenSequence tokenize(std::string_view text, std::string source_instance_id) {
  TokenSequence seq;
  seq.source_instance_id = std::move(source_instance_id);
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) split_chunk(text.substr(i, j - i), seq.tokens);
    i = j;
  }
  return seq;
}

}  // namespace emocpm::text
