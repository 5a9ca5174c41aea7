#include "emocpm/text/embeddings.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "emocpm/detail/parse.hpp"
#include "emocpm/error.hpp"
#include "emocpm/random.hpp"
#include "emocpm/text/tokenizer.hpp"

namespace emocpm::text {

const std::vector<double>* EmbeddingTable::find(const std::string& token) const {
  const auto it = vectors.find(token);
  return it == vectors.end() ? nullptr : &it->second;
}

EmbeddingTable parse_embedding_table(std::istream& in, const std::string& source_name) {
  EmbeddingTable table;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = detail::split_ws(line);
    if (fields.empty()) continue;
    if (first && fields.size() == 2 && detail::to_int<std::size_t>(fields[0]) &&
        detail::to_int<std::size_t>(fields[1])) {
      first = false;  // word2vec "<count> <dim>" header
      continue;
    }
    if (fields.size() < 2) throw ParseError(source_name, lineno, "entry has no vector values");
    const std::size_t dim = fields.size() - 1;
    if (table.dimension == 0) {
      table.dimension = dim;
    } else if (dim != table.dimension) {
      throw ParseError(source_name, lineno,
                       "expected " + std::to_string(table.dimension) + " values, got " +
                           std::to_string(dim));
    }
    std::vector<double> vec(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const auto v = detail::to_double(fields[i + 1]);
      if (!v) throw ParseError(source_name, lineno, "bad number '" + std::string(fields[i + 1]) + "'");
      vec[i] = *v;
    }
    table.vectors.insert_or_assign(std::string(fields[0]), std::move(vec));
    first = false;
  }
  if (table.vectors.empty()) throw ParseError(source_name, lineno, "embedding file is empty");
  return table;
}

EmbeddingTable load_embedding_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot open embedding file " + path.string());
  return parse_embedding_table(in, path.string());
}

std::vector<double> pooled_embedding_features(const std::vector<std::string>& tokens,
                                              const EmbeddingTable& table) {
  std::vector<double> mean(table.dimension, 0.0);
  std::size_t found = 0;
  for (const auto& t : tokens) {
    if (const auto* v = table.find(t)) {
      for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += (*v)[i];
      ++found;
    }
  }
  if (found > 1)
    for (double& x : mean) x /= static_cast<double>(found);
  return mean;
}

TokenEmbeddingStore parse_token_embedding_store(std::istream& in, const std::string& source_name) {
  TokenEmbeddingStore store;
  std::string line;
  std::size_t lineno = 0;
  auto next_content_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      const auto t = detail::trim(line);
      if (!t.empty() && t.front() != '#') return true;
    }
    return false;
  };
  while (next_content_line()) {
    const auto head = detail::split_ws(line);
    const auto rows = head.size() == 2 ? detail::to_int<std::size_t>(head[1]) : std::nullopt;
    if (!rows) throw ParseError(source_name, lineno, "expected '<id> <T>' record header");
    const std::string id(head[0]);
    if (store.sequences.contains(id)) throw ParseError(source_name, lineno, "duplicate id " + id);
    Matrix m;
    m.rows = *rows;
    for (std::size_t r = 0; r < *rows; ++r) {
      if (!next_content_line())
        throw ParseError(source_name, lineno, "record " + id + " ends after " + std::to_string(r) + " rows");
      const auto fields = detail::split_ws(line);
      if (store.dimension == 0) store.dimension = fields.size();
      if (fields.size() != store.dimension) {
        throw ParseError(source_name, lineno,
                         "expected " + std::to_string(store.dimension) + " values, got " +
                             std::to_string(fields.size()));
      }
      for (auto f : fields) {
        const auto v = detail::to_double(f);
        if (!v) throw ParseError(source_name, lineno, "bad number '" + std::string(f) + "'");
        m.values.push_back(*v);
      }
    }
    m.cols = store.dimension;
    store.sequences.emplace(id, std::move(m));
  }
  return store;
}

TokenEmbeddingStore load_token_embedding_store(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot open token embedding store " + path.string());
  return parse_token_embedding_store(in, path.string());
}

void write_token_embedding_store(std::ostream& out, const TokenEmbeddingStore& store,
                                 const std::vector<std::string>& id_order) {
  out << std::setprecision(17);
  for (const auto& id : id_order) {
    const auto it = store.sequences.find(id);
    if (it == store.sequences.end()) throw LookupError("no token embeddings for id " + id);
    const Matrix& m = it->second;
    out << id << ' ' << m.rows << '\n';
    for (std::size_t r = 0; r < m.rows; ++r) {
      const auto row = m.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? " " : "") << row[c];
      out << '\n';
    }
  }
}

std::vector<double> fallback_vector(const std::string& token, std::uint64_t seed,
                                    std::size_t dimension) {
  Rng rng(splitmix64(fnv1a64(token) ^ splitmix64(seed)));
  std::vector<double> v(dimension);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

std::vector<Matrix> resolve_token_embeddings(const data::Corpus& corpus,
                                             const TokenEmbeddingStore* store,
                                             const FallbackEmbedding& fallback) {
  std::vector<Matrix> out;
  out.reserve(corpus.size());
  std::vector<std::string> missing;
  const std::size_t dim =
      store != nullptr && store->dimension > 0 ? store->dimension : fallback.dimension;
  for (const auto& inst : corpus.instances) {
    if (store != nullptr) {
      if (const auto it = store->sequences.find(inst.id); it != store->sequences.end()) {
        out.push_back(it->second);
        continue;
      }
    }
    if (!fallback.enabled) {
      missing.push_back(inst.id);
      continue;
    }
    const auto tokens = tokenize(inst.text).tokens;
    Matrix m(std::max<std::size_t>(tokens.size(), 1), dim);
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      const auto v = fallback_vector(tokens[t], fallback.seed, dim);
      std::copy(v.begin(), v.end(), m.row(t).begin());
    }
    out.push_back(std::move(m));
  }
  if (!missing.empty()) {
    std::ostringstream os;
    os << "no token embeddings for " << missing.size() << " instance(s):";
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) os << ' ' << missing[i];
    if (missing.size() > 20) os << " ...";
    throw LookupError(os.str());
  }
  return out;
}

}  // namespace emocpm::text
