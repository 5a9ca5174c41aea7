#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "emocpm/error.hpp"
#include "emocpm/random.hpp"
#include "emocpm/text/embeddings.hpp"
#include "emocpm/text/lexicon.hpp"
#include "emocpm/text/ngrams.hpp"
#include "emocpm/text/porter.hpp"
#include "emocpm/text/tfidf.hpp"
#include "emocpm/text/tokenizer.hpp"

using namespace emocpm;
using namespace emocpm::text;

using Tokens = std::vector<std::string>;

namespace {

std::vector<std::pair<std::string, std::string>> porter_vectors() {
  std::ifstream in(std::string(EMOCPM_TEST_DATA_DIR) + "/porter_vectors.tsv");
  REQUIRE(in);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    out.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return out;
}

}  // namespace

TEST_SUITE("tokenize") {
  TEST_CASE("lowercases and splits on whitespace") {
    CHECK(tokenize("Feelin a bit sad tonight").tokens == Tokens{"feelin", "a", "bit", "sad", "tonight"});
  }
  TEST_CASE("empty text") {
    CHECK(tokenize("").tokens.empty());
    CHECK(tokenize("   \t\n").tokens.empty());
  }
  TEST_CASE("punctuation becomes separate tokens") {
    CHECK(tokenize("YAY. VISIT").tokens == Tokens{"yay", ".", "visit"});
    CHECK(tokenize("what?!").tokens == Tokens{"what", "?", "!"});
  }
  TEST_CASE("mentions hashtags urls and emoticons stay whole") {
    CHECK(tokenize("@Bob loves #SummerTime :-) http://x.co/a?b=1").tokens ==
          Tokens{"@bob", "loves", "#summertime", ":-)", "http://x.co/a?b=1"});
    CHECK(tokenize("so sad :( <3").tokens == Tokens{"so", "sad", ":(", "<3"});
    CHECK(tokenize("XD").tokens == Tokens{"xd"});
  }
  TEST_CASE("letter emoticons need a whole chunk") {
    CHECK(tokenize("xdx").tokens == Tokens{"xdx"});
    CHECK(tokenize(":data").tokens == Tokens{":", "data"});
  }
  TEST_CASE("internal apostrophes are kept") {
    CHECK(tokenize("Don't 'quote'").tokens == Tokens{"don't", "'", "quote", "'"});
  }
  TEST_CASE("utf8 bytes remain inside words") {
    CHECK(tokenize("Café!").tokens == Tokens{"café", "!"});
  }
  TEST_CASE("carries the instance id and never emits empty tokens") {
    const auto seq = tokenize("  a ,, b!! #  @ ", "t-7");
    CHECK(seq.source_instance_id == "t-7");
    for (const auto& t : seq.tokens) CHECK(!t.empty());
    CHECK(seq.tokens == Tokens{"a", ",", ",", "b", "!", "!", "#", "@"});
  }
}

TEST_SUITE("porter") {
  TEST_CASE("reference examples") {
    CHECK(porter_stem("caresses") == "caress");
    CHECK(porter_stem("running") == "run");
    CHECK(porter_stem("a") == "a");
    CHECK(porter_stem("ponies") == "poni");
    CHECK(porter_stem("generalizations") == "gener");
    CHECK(porter_stem("sensibilities") == "sensibl");
  }
  TEST_CASE("matches the frozen reference vectors") {
    const auto vectors = porter_vectors();
    REQUIRE(vectors.size() > 1000);
    std::size_t mismatches = 0;
    for (const auto& [word, expected] : vectors) {
      if (porter_stem(word) != expected) {
        ++mismatches;
        if (mismatches <= 10) MESSAGE(word << " -> " << porter_stem(word) << " expected " << expected);
      }
    }
    CHECK(mismatches == 0);
  }
  TEST_CASE("idempotent on its outputs apart from frozen re-reductions") {
    // Stripping a suffix can expose another removable ending, e.g.
    // agreed -> agre -> agr. The exceptions come from an independent stemmer.
    std::map<std::string, std::string> restem;
    {
      std::ifstream in(std::string(EMOCPM_TEST_DATA_DIR) + "/porter_restem.tsv");
      REQUIRE(in);
      std::string line;
      while (std::getline(in, line)) {
        const auto tab = line.find('\t');
        restem[line.substr(0, tab)] = line.substr(tab + 1);
      }
    }
    REQUIRE(!restem.empty());
    std::size_t idempotent = 0;
    for (const auto& [word, stemmed] : porter_vectors()) {
      const auto it = restem.find(stemmed);
      if (it == restem.end()) {
        CHECK(porter_stem(stemmed) == stemmed);
        ++idempotent;
      } else {
        CHECK(porter_stem(stemmed) == it->second);
      }
    }
    CHECK(idempotent > porter_vectors().size() * 9 / 10);
  }
  TEST_CASE("stem keeps order and id") {
    const auto seq = stem(tokenize("Crying ponies", "x"));
    CHECK(seq.tokens == Tokens{"cry", "poni"});
    CHECK(seq.source_instance_id == "x");
  }
}

TEST_SUITE("ngrams") {
  TEST_CASE("unigrams then bigrams") {
    CHECK(extract_ngrams({"a", "b", "c"}) == Tokens{"a", "b", "c", "a b", "b c"});
    CHECK(extract_ngrams({"x"}) == Tokens{"x"});
    CHECK(extract_ngrams({}).empty());
  }
  TEST_CASE("bigram helper") { CHECK(bigram("a", "b") == "a b"); }
}

TEST_SUITE("tfidf") {
  TEST_CASE("idf formula on two documents") {
    const auto m = TfIdfModel::fit({{"a", "b"}, {"a", "c"}});
    CHECK(m.corpus_size() == 2);
    CHECK(m.idf("a") == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m.idf("b") == doctest::Approx(std::log(1.5) + 1.0).epsilon(1e-15));
    CHECK(m.idf("b") == doctest::Approx(1.405).epsilon(1e-3));
    CHECK(m.document_frequency("a b") == 1);
    CHECK(m.dimension() == 5);  // a, b, c, a b, a c
    CHECK_THROWS_AS(m.idf("zzz"), LookupError);
  }
  TEST_CASE("vocabulary indices are dense in sorted order") {
    const auto m = TfIdfModel::fit({{"b", "a"}, {"c"}});
    std::size_t expect = 0;
    for (const auto& [term, idx] : m.vocabulary()) {
      CHECK(idx == expect++);
      CHECK(m.document_frequency(term) >= 1);
    }
  }
  TEST_CASE("transform values by hand") {
    const auto m = TfIdfModel::fit({{"a", "b"}, {"a", "c"}});
    const auto v = m.transform({"a", "a", "b"});
    // raw: a -> 2*1, b -> 1*idf(b), "a a" unseen, "a b" -> idf(a b)
    const double ib = std::log(1.5) + 1.0;
    const double iab = std::log(1.5) + 1.0;
    const double norm = std::sqrt(4.0 + ib * ib + iab * iab);
    std::map<std::string, double> got;
    for (auto [idx, val] : v.entries) got[m.terms()[idx]] = val;
    CHECK(got.size() == 3);
    CHECK(got["a"] == doctest::Approx(2.0 / norm).epsilon(1e-14));
    CHECK(got["b"] == doctest::Approx(ib / norm).epsilon(1e-14));
    CHECK(got["a b"] == doctest::Approx(iab / norm).epsilon(1e-14));
  }
  TEST_CASE("empty and unseen documents transform to zero") {
    const auto m = TfIdfModel::fit({{"a", "b"}});
    CHECK(m.transform({}).empty());
    CHECK(m.transform({"q", "r"}).empty());
  }
  TEST_CASE("unfitted model refuses to transform") {
    TfIdfModel m;
    CHECK_THROWS_AS(m.transform({"a"}), StateError);
  }
  TEST_CASE("training vectors are unit length and stay in the vocabulary") {
    Rng rng(5);
    std::vector<std::vector<std::string>> docs;
    for (int d = 0; d < 60; ++d) {
      std::vector<std::string> doc;
      const auto len = 1 + rng.below(12);
      for (std::uint64_t i = 0; i < len; ++i) doc.push_back("w" + std::to_string(rng.below(25)));
      docs.push_back(doc);
    }
    const auto m = TfIdfModel::fit(docs);
    for (const auto& doc : docs) {
      const auto v = m.transform(doc);
      CHECK(is_well_formed(v));
      CHECK(std::abs(v.norm() - 1.0) < 1e-12);
      CHECK(v.extent() <= m.dimension());
    }
  }
  TEST_CASE("round trip through parts") {
    const auto m = TfIdfModel::fit({{"x", "y"}, {"y", "z", "z"}});
    const auto r = TfIdfModel::from_parts(m.terms(), m.df_by_index(), m.corpus_size());
    CHECK(r.transform({"z", "y", "x"}) == m.transform({"z", "y", "x"}));
  }
}

TEST_SUITE("lexicon") {
  TEST_CASE("bundled lexicons load with stemmed entries") {
    const auto lex = load_lexicon_dir(std::string(EMOCPM_REPO_DATA_DIR) + "/lexicons");
    REQUIRE(lex.size() == 5);
    CHECK(lex[0].component == "cognitive_appraisal");
    CHECK(lex[3].component == "motor_expressions");
    std::size_t total = 0;
    for (const auto& l : lex) {
      CHECK(!l.entries.empty());
      for (const auto& e : l.entries) CHECK(porter_stem(e) == porter_stem(porter_stem(e)));
      total += l.entries.size();
    }
    CHECK(total / 5 >= 20);
    CHECK(lex[3].entries.contains("smile"));
  }
  TEST_CASE("count and presence flag") {
    DictionaryLexicon motor{"motor_expressions", {"smile", "laugh"}};
    DictionaryLexicon feel{"subjective_feelings", {"sad"}};
    CHECK(dictionary_features({"i", "smile"}, {motor}) == std::vector<double>{1, 1});
    CHECK(dictionary_features({"smile", "smile", "laugh"}, {motor, feel}) ==
          std::vector<double>{3, 1, 0, 0});
    CHECK(dictionary_features({"x"}, {motor, feel}) == std::vector<double>{0, 0, 0, 0});
    CHECK(dictionary_features({"smile"}, {}).empty());
  }
  TEST_CASE("file errors") {
    const auto dir = std::filesystem::temp_directory_path() / "emocpm_lexicon_test";
    std::filesystem::create_directories(dir);
    { std::ofstream(dir / "empty.txt") << "# only a comment\n\n"; }
    CHECK_THROWS_AS(load_lexicon(dir / "empty.txt", "motor_expressions"), ParseError);
    CHECK_THROWS_AS(load_lexicon_dir(dir), ResourceError);
    { std::ofstream(dir / "one.txt") << "Smiling  # trailing comment\n"; }
    CHECK(load_lexicon(dir / "one.txt", "m").entries == std::set<std::string>{"smile"});
    std::filesystem::remove_all(dir);
  }
}

TEST_SUITE("embeddings") {
  TEST_CASE("parse a small table") {
    std::istringstream in("cat 0.1 0.2\ndog 0.3 0.4\n");
    const auto t = parse_embedding_table(in, "mem");
    CHECK(t.dimension == 2);
    CHECK(t.vectors.size() == 2);
    CHECK(*t.find("dog") == std::vector<double>{0.3, 0.4});
    CHECK(t.find("emu") == nullptr);
  }
  TEST_CASE("word2vec header is skipped") {
    std::istringstream in("2 3\na 1 2 3\nb 4 5 6\n");
    CHECK(parse_embedding_table(in, "mem").dimension == 3);
  }
  TEST_CASE("dimension mismatch names the line") {
    std::istringstream in("cat 0.1 0.2\ncat2 0.1\n");
    try {
      parse_embedding_table(in, "mem");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_embedding_table(empty, "mem"), ParseError);
  }
  TEST_CASE("mean pooling") {
    std::istringstream in("v 1 2\nw 3 6\n");
    const auto t = parse_embedding_table(in, "mem");
    CHECK(pooled_embedding_features({"v"}, t) == std::vector<double>{1, 2});
    CHECK(pooled_embedding_features({"v", "zz", "w"}, t) == std::vector<double>{2, 4});
    CHECK(pooled_embedding_features({"q"}, t) == std::vector<double>{0, 0});
  }
  TEST_CASE("token store round trip") {
    TokenEmbeddingStore s;
    s.dimension = 2;
    s.sequences["a"] = Matrix{2, 2, {1, 2, 3, 4}};
    s.sequences["b"] = Matrix{1, 2, {0.5, -0.25}};
    std::ostringstream out;
    write_token_embedding_store(out, s, {"a", "b"});
    std::istringstream in("# comment\n\n" + out.str());
    const auto r = parse_token_embedding_store(in, "mem");
    CHECK(r.dimension == 2);
    CHECK(r.sequences.at("a") == s.sequences.at("a"));
    CHECK(r.sequences.at("b") == s.sequences.at("b"));
  }
  TEST_CASE("fallback vectors are pure and bounded") {
    const auto a = fallback_vector("smile", 3, 64);
    CHECK(a.size() == 64);
    CHECK(a == fallback_vector("smile", 3, 64));
    CHECK(a != fallback_vector("smile", 4, 64));
    CHECK(a != fallback_vector("smiles", 3, 64));
    for (double x : a) CHECK((x >= -1.0 && x <= 1.0));
    CHECK(FallbackEmbedding{}.dimension == 64);
  }
  TEST_CASE("resolution uses the store then the fallback") {
    data::Corpus c;
    c.inventory = data::tec_inventory();
    c.instances = {{"s1", "ignored", {"joy"}, {}, data::Domain::Tec},
                   {"s2", "ha ha", {"joy"}, {}, data::Domain::Tec},
                   {"s3", "", {"joy"}, {}, data::Domain::Tec}};
    TokenEmbeddingStore store;
    store.dimension = 3;
    store.sequences["s1"] = Matrix{1, 3, {7, 8, 9}};
    const auto m = resolve_token_embeddings(c, &store, {});
    REQUIRE(m.size() == 3);
    CHECK(m[0] == store.sequences["s1"]);
    CHECK(m[1].rows == 2);
    CHECK(m[1].cols == 3);
    CHECK(std::equal(m[1].row(0).begin(), m[1].row(0).end(), m[1].row(1).begin()));
    CHECK(m[2] == Matrix{1, 3, {0, 0, 0}});

    FallbackEmbedding off;
    off.enabled = false;
    try {
      resolve_token_embeddings(c, &store, off);
      FAIL("expected a lookup error");
    } catch (const LookupError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("s2") != std::string::npos);
      CHECK(msg.find("s3") != std::string::npos);
    }
    const auto no_store = resolve_token_embeddings(c, nullptr, {});
    CHECK(no_store[0].cols == 64);
  }
}
