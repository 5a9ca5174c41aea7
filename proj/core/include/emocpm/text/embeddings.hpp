#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "emocpm/data/corpus.hpp"
#include "emocpm/matrix.hpp"

namespace emocpm::text {

// Word vectors in the GloVe/word2vec text layout.
struct EmbeddingTable {
  std::size_t dimension = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;

  const std::vector<double>* find(const std::string& token) const;
};

// One entry per line: token followed by whitespace-separated decimals. The
// dimension comes from the first entry; a leading "<count> <dim>" header line
// is skipped. Inconsistent lines are ParseErrors with their line number.
EmbeddingTable load_embedding_file(const std::filesystem::path& path);
EmbeddingTable parse_embedding_table(std::istream& in, const std::string& source_name);

// Mean of the in-vocabulary token vectors; zeros when none is found.
std::vector<double> pooled_embedding_features(const std::vector<std::string>& tokens,
                                              const EmbeddingTable& table);

// Per-instance token-level input matrices.
struct TokenEmbeddingStore {
  std::size_t dimension = 0;
  std::unordered_map<std::string, Matrix> sequences;
};

// Records are "<id> <T>" followed by T rows of d decimals; blank lines and
// '#' comment lines are ignored.
TokenEmbeddingStore load_token_embedding_store(const std::filesystem::path& path);
TokenEmbeddingStore parse_token_embedding_store(std::istream& in, const std::string& source_name);
void write_token_embedding_store(std::ostream& out, const TokenEmbeddingStore& store,
                                 const std::vector<std::string>& id_order);

struct FallbackEmbedding {
  bool enabled = true;
  std::size_t dimension = 64;
  std::uint64_t seed = 0;
};

// Deterministic pseudo-random vector, a pure function of its arguments.
std::vector<double> fallback_vector(const std::string& token, std::uint64_t seed,
                                    std::size_t dimension);

// Store hits are returned verbatim. Misses use hashed vectors of the
// instance's tokens when the fallback is enabled (an instance without tokens
// becomes one zero row); otherwise LookupError lists the missing ids.
std::vector<Matrix> resolve_token_embeddings(const data::Corpus& corpus,
                                             const TokenEmbeddingStore* store,
                                             const FallbackEmbedding& fallback);

}  // namespace emocpm::text
