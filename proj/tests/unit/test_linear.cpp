#include <doctest.h>

#include <cmath>
#include <sstream>

#include "emocpm/data/split.hpp"
#include "emocpm/error.hpp"
#include "emocpm/linear/pipeline.hpp"
#include "emocpm/random.hpp"

using namespace emocpm;
using namespace emocpm::linear;

namespace {

SparseVector sv(std::vector<std::pair<std::size_t, double>> e) { return SparseVector{std::move(e)}; }

data::Instance instance(std::string id, std::string text, std::vector<std::string> emotions,
                        data::CpmFlags cpm = {}) {
  return {std::move(id), std::move(text), std::move(emotions), cpm, data::Domain::Other};
}

data::Corpus bundled_tec(std::size_t n) {
  auto c = data::load_corpus(std::string(EMOCPM_REPO_DATA_DIR) + "/synthetic/tec_synthetic.jsonl");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return c.subset(idx);
}

}  // namespace

TEST_SUITE("maxent") {
  TEST_CASE("separable toy set is fit perfectly") {
    const std::vector<SparseVector> x = {sv({{0, 1.0}}), sv({{0, 0.8}, {2, 0.1}}), sv({{1, 1.0}}),
                                         sv({{1, 0.7}, {2, 0.2}})};
    const std::vector<std::size_t> y = {0, 0, 1, 1};
    const auto m = MaxEntModel::train_multinomial(x, y, 3, {"a", "b"});
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(m.predict(x[i]) == y[i]);
    const std::vector<std::uint8_t> yb = {0, 0, 1, 1};
    const auto b = MaxEntModel::train_binary(x, yb, 3, "b");
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(b.predict(x[i]) == yb[i]);
  }
  TEST_CASE("zero iterations give uniform probabilities") {
    MaxEntConfig cfg;
    cfg.iterations = 0;
    const auto m = MaxEntModel::train_multinomial(std::vector{sv({{0, 1.0}}), sv({{1, 1.0}})},
                                                  std::vector<std::size_t>{0, 2}, 2, {"a", "b", "c"}, cfg);
    for (double s : m.scores(sv({{0, 1.0}}))) CHECK(s == doctest::Approx(1.0 / 3).epsilon(1e-15));
  }
  TEST_CASE("symmetric weights tie to the first class") {
    const auto m = MaxEntModel::from_parts(MaxEntMode::Multinomial, {"a", "b"}, Matrix(2, 2, {1, 1, 2, 2}), {0, 0});
    const auto s = m.scores(sv({{0, 0.3}, {1, 0.4}}));
    CHECK(s[0] == 0.5);
    CHECK(s[1] == 0.5);
    CHECK(m.predict(sv({{1, 1.0}})) == 0);
  }
  TEST_CASE("hand-set binary weight gives three quarters") {
    const auto m = MaxEntModel::from_parts(MaxEntMode::Binary, {"pos"}, Matrix(1, 1, {std::log(3.0)}), {0.0});
    CHECK(m.scores(sv({{0, 1.0}}))[0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(m.predict(sv({{0, 1.0}})) == 1);
  }
  TEST_CASE("errors") {
    CHECK_THROWS_AS(MaxEntModel::train_multinomial({}, {}, 2, {"a"}), DataError);
    const auto m = MaxEntModel::from_parts(MaxEntMode::Binary, {"p"}, Matrix(1, 1, {1.0}), {0.0});
    CHECK_THROWS_AS(m.scores(sv({{3, 1.0}})), ShapeError);
    CHECK_THROWS_AS(MaxEntModel::train_multinomial(std::vector{sv({{0, 1.0}})}, std::vector<std::size_t>{0}, 1, {}),
                    ConfigError);
  }
  TEST_CASE("single observed class is a flagged constant predictor") {
    const auto m = MaxEntModel::train_multinomial(std::vector{sv({{0, 1.0}}), sv({{1, 1.0}})},
                                                  std::vector<std::size_t>{1, 1}, 2, {"a", "b", "c"});
    CHECK(m.degenerate());
    CHECK(m.predict(sv({{0, 5.0}})) == 1);
    const auto b = MaxEntModel::train_binary(std::vector{sv({{0, 1.0}})}, std::vector<std::uint8_t>{0}, 1, "p");
    CHECK(b.degenerate());
    CHECK(b.predict(sv({{0, 1.0}})) == 0);
  }
  TEST_CASE("softmax scores sum to one") {
    Rng rng(3);
    std::vector<SparseVector> x;
    std::vector<std::size_t> y;
    for (int i = 0; i < 40; ++i) {
      SparseVector v;
      for (std::size_t f = 0; f < 6; ++f)
        if (rng.uniform() < 0.5) v.entries.push_back({f, rng.uniform(-1, 1)});
      x.push_back(v);
      y.push_back(rng.below(4));
    }
    const auto m = MaxEntModel::train_multinomial(x, y, 6, {"a", "b", "c", "d"});
    for (const auto& v : x) {
      double s = 0;
      for (double p : m.scores(v)) s += p;
      CHECK(std::abs(s - 1.0) < 1e-12);
    }
  }
  TEST_CASE("an all-zero feature block changes nothing") {
    Rng rng(4);
    std::vector<SparseVector> x;
    std::vector<std::size_t> y;
    for (int i = 0; i < 30; ++i) {
      x.push_back(sv({{static_cast<std::size_t>(rng.below(4)), 1.0}, {4, rng.uniform()}}));
      y.push_back(rng.below(3));
    }
    const auto narrow = MaxEntModel::train_multinomial(x, y, 5, {"a", "b", "c"});
    const auto wide = MaxEntModel::train_multinomial(x, y, 9, {"a", "b", "c"});
    for (std::size_t r = 0; r < 5; ++r)
      for (std::size_t c = 0; c < 3; ++c) CHECK(narrow.weights().values[r * 3 + c] == wide.weights().values[r * 3 + c]);
    for (const auto& v : x) CHECK(narrow.predict(v) == wide.predict(v));
  }
}

TEST_SUITE("one-vs-rest") {
  TEST_CASE("one binary model per label") {
    const auto inv = data::reman_inventory();
    std::vector<SparseVector> x = {sv({{0, 1.0}}), sv({{1, 1.0}})};
    std::vector<std::vector<std::size_t>> y = {{0, 3}, {5}};
    const auto e = OneVsRestEnsemble::train(x, y, 2, inv);
    CHECK(e.size() == 10);
    for (std::size_t l = 0; l < 10; ++l) CHECK(e.models()[l].classes()[0] == inv[l]);
  }
  TEST_CASE("all below threshold gives the empty set") {
    auto m = MaxEntModel::from_parts(MaxEntMode::Binary, {"x"}, Matrix(1, 1, {-1.0}), {0.0});
    const auto e = OneVsRestEnsemble::from_models({m, m});
    CHECK(e.predict(sv({{0, 1.0}})).empty());
  }
  TEST_CASE("complementary labels reproduce the binary decision") {
    Rng rng(6);
    std::vector<SparseVector> x;
    std::vector<std::uint8_t> yb;
    std::vector<std::vector<std::size_t>> y;
    for (int i = 0; i < 50; ++i) {
      x.push_back(sv({{0, rng.uniform(-1, 1)}, {1, rng.uniform(-1, 1)}}));
      yb.push_back(x.back().entries[0].second + 0.3 * x.back().entries[1].second > 0.1 ? 1 : 0);
      y.push_back({yb.back() ? 0u : 1u});
    }
    const auto binary = MaxEntModel::train_binary(x, yb, 2, "pos");
    const auto ovr = OneVsRestEnsemble::train(x, y, 2, {"pos", "neg"});
    for (int i = 0; i < 200; ++i) {
      const auto probe = sv({{0, rng.uniform(-1, 1)}, {1, rng.uniform(-1, 1)}});
      const auto s = ovr.scores(probe);
      CHECK((s[0] >= s[1] ? 1u : 0u) == binary.predict(probe));
    }
  }
  TEST_CASE("result does not depend on thread count") {
    Rng rng(7);
    std::vector<SparseVector> x;
    std::vector<std::vector<std::size_t>> y;
    for (int i = 0; i < 30; ++i) {
      x.push_back(sv({{static_cast<std::size_t>(rng.below(5)), 1.0}}));
      y.push_back({static_cast<std::size_t>(rng.below(4))});
    }
    const auto a = OneVsRestEnsemble::train(x, y, 5, {"a", "b", "c", "d"}, {}, 1);
    const auto b = OneVsRestEnsemble::train(x, y, 5, {"a", "b", "c", "d"}, {}, 4);
    for (std::size_t l = 0; l < 4; ++l) CHECK(a.models()[l].weights() == b.models()[l].weights());
  }
}

TEST_SUITE("features") {
  const auto tfidf = text::TfIdfModel::fit({{"smile", "today"}, {"sad", "today"}});

  TEST_CASE("combination names round trip") {
    const auto all = FeatureCombination::all(true);
    CHECK(all.size() == 16);
    CHECK(all.front().count() == 0);
    CHECK(FeatureCombination::all(false).size() == 8);
    for (const auto& c : all) CHECK(FeatureCombination::parse(c.name()) == c);
    CHECK_THROWS_AS(FeatureCombination::parse("bow+zzz"), ConfigError);
  }
  TEST_CASE("no blocks reduces to tf-idf") {
    FeatureBuilder b(tfidf, {}, {}, 0);
    CHECK(b.dimension() == tfidf.dimension());
    CHECK(b.build("x", {"smile"}, {"smile"}) == tfidf.transform({"smile"}));
  }
  TEST_CASE("appraisal only for cognitive appraisal") {
    AppraisalSidecar app;
    app.dimension = 2;
    app.values["x"] = {0.5, 0.0};
    FeatureCombination c;
    c.appraisal = true;
    FeatureResources r;
    r.appraisal = &app;
    CHECK_THROWS_AS(FeatureBuilder(tfidf, c, r, 3), ConfigError);
    FeatureBuilder ok(tfidf, c, r, data::kCognitiveAppraisal);
    const auto v = ok.build("x", {}, {});
    CHECK(v.entries == std::vector<std::pair<std::size_t, double>>{{tfidf.dimension(), 0.5}});
    CHECK_THROWS_AS(ok.build("missing", {}, {}), LookupError);
  }
  TEST_CASE("blocks append at recorded offsets") {
    std::istringstream emb_in("smile 1 2 3\n");
    const auto emb = text::parse_embedding_table(emb_in, "mem");
    std::istringstream pos_in("x\tNN VB NN\n");
    const auto pos = parse_pos_sidecar(pos_in, "mem");
    std::vector<text::DictionaryLexicon> lex = {{"motor_expressions", {"smile"}}};
    FeatureResources r{&lex, &pos, &emb, nullptr};
    FeatureCombination c;
    c.dictionaries = c.pos_tags = c.word_embeddings = true;
    FeatureBuilder b(tfidf, c, r, 3);
    const std::size_t t = tfidf.dimension();
    CHECK(b.dimension() == t + 2 + 2 + 3);
    REQUIRE(b.blocks().size() == 4);
    CHECK(b.blocks()[3].name == "emb");
    CHECK(b.blocks()[3].offset == t + 4);
    const auto v = b.build("x", {"smile"}, {"smile"});
    std::vector<double> tail(7, 0.0);
    for (auto [i, val] : v.entries)
      if (i >= t) tail[i - t] = val;
    CHECK(tail[0] == 1.0);
    CHECK(tail[1] == 1.0);
    CHECK(tail[2] == doctest::Approx(2.0 / 3));  // NN
    CHECK(tail[3] == doctest::Approx(1.0 / 3));  // VB
    CHECK(tail[6] == 3.0);
  }
  TEST_CASE("missing resources are reported") {
    FeatureCombination c;
    c.word_embeddings = true;
    CHECK_THROWS_AS(FeatureBuilder(tfidf, c, {}, 1), ResourceError);
    c = {};
    c.pos_tags = true;
    CHECK_THROWS_AS(FeatureBuilder(tfidf, c, {}, 1), ResourceError);
  }
  TEST_CASE("sidecar parse errors") {
    std::istringstream bad("x\t1 2\ny\t1\n");
    try {
      parse_appraisal_sidecar(bad, "mem");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    std::istringstream no_tab("x 1 2\n");
    CHECK_THROWS_AS(parse_pos_sidecar(no_tab, "mem"), ParseError);
  }
  TEST_CASE("component stacking") {
    const auto base = sv({{1, 0.5}});
    const std::array<std::uint8_t, 5> zero{};
    const auto z = stack_component_features(base, 4, zero);
    CHECK(z == base);
    const std::array<std::uint8_t, 5> feel{1, 0, 0, 0, 1};
    const auto f = stack_component_features(base, 4, feel);
    CHECK(f.entries == std::vector<std::pair<std::size_t, double>>{{1, 0.5}, {4, 1.0}, {8, 1.0}});
    const std::array<std::uint8_t, 4> short_flags{};
    CHECK_THROWS_AS(stack_component_features(base, 4, short_flags), ShapeError);
  }
}

TEST_SUITE("feature search") {
  TEST_CASE("an informative lexicon is selected") {
    // Positive instances use lexicon words that never repeat between train
    // and dev, so only the dictionary block generalises.
    std::vector<text::DictionaryLexicon> lex(5);
    for (std::size_t c = 0; c < 5; ++c) lex[c].component = std::string(data::kComponentNames[c]);
    for (int w = 0; w < 80; ++w) lex[3].entries.insert("cue" + std::to_string(w));
    data::Corpus train, dev;
    train.inventory = dev.inventory = {"x"};
    Rng rng(12);
    for (int i = 0; i < 80; ++i) {
      const bool pos = i % 2 == 0;
      data::CpmFlags cpm{};
      cpm[3] = pos;
      const std::string filler = "w" + std::to_string(rng.below(10)) + " w" + std::to_string(rng.below(10));
      const std::string text = filler + (pos ? " cue" + std::to_string(i / 2) : "");
      (i < 60 ? train : dev).instances.push_back(instance("i" + std::to_string(i), text, {"x"}, cpm));
    }
    FeatureResources r;
    r.lexicons = &lex;
    const auto s = feature_combination_search(train, dev, 3, r);
    CHECK(s.best.dictionaries);
    CHECK(s.best_f1 == 1.0);
    CHECK(s.scores.size() == 2);  // bow, bow+dict; POS and embeddings unavailable
    CHECK(s.unavailable == std::vector<std::string>{"pos", "emb"});
    for (const auto& score : s.scores) CHECK(s.best_f1 >= score.dev_f1);
    std::ostringstream out;
    write_ablation_tsv(out, {s});
    CHECK(out.str().find("motor_expressions\t") != std::string::npos);
    CHECK(out.str().find("\tbow+dict\t1.0000\n") != std::string::npos);
  }
  TEST_CASE("uninformative features tie and the empty combination wins") {
    std::vector<text::DictionaryLexicon> lex = {{"cognitive_appraisal", {"same"}}};
    data::Corpus c;
    c.inventory = {"x"};
    for (int i = 0; i < 20; ++i) {
      data::CpmFlags cpm{};
      cpm[0] = i % 3 == 0;
      c.instances.push_back(instance("i" + std::to_string(i), "same text", {"x"}, cpm));
    }
    FeatureResources r;
    r.lexicons = &lex;
    const auto s = feature_combination_search(c, c, 0, r);
    CHECK(s.best.count() == 0);
    for (const auto& score : s.scores) CHECK(score.dev_f1 == s.scores.front().dev_f1);
  }
}

TEST_SUITE("linear pipeline") {
  TEST_CASE("every tag trains, predicts, and round trips") {
    const auto corpus = bundled_tec(300);
    const auto [train, test] = data::split_train_test(corpus, 0.8, 1);
    const auto lex = text::load_lexicon_dir(text::default_lexicon_dir());
    FeatureResources r;
    r.lexicons = &lex;
    LinearConfig cfg;
    cfg.maxent.iterations = 60;
    for (auto tag : {LinearTag::EmoMeBase, LinearTag::CpmMeBase, LinearTag::CpmMeAdv,
                     LinearTag::EmoCpmMePred, LinearTag::EmoCpmMeGold}) {
      CAPTURE(to_string(tag));
      const auto p = LinearPipeline::train(tag, train, r, cfg);
      const auto preds = p.predict(test, {});
      CHECK(preds.items.size() == test.size());
      CHECK(preds.emotion_head == (tag != LinearTag::CpmMeBase && tag != LinearTag::CpmMeAdv));
      CHECK(preds.cpm_head == (tag != LinearTag::EmoMeBase && tag != LinearTag::EmoCpmMeGold));
      if (tag == LinearTag::CpmMeAdv) CHECK(p.searches().size() == 5);
      const auto again = LinearPipeline::from_json(p.to_json()).predict(test, {});
      for (std::size_t i = 0; i < test.size(); ++i) {
        CHECK(again.items[i].emotions == preds.items[i].emotions);
        CHECK(again.items[i].emotion_scores == preds.items[i].emotion_scores);
        CHECK(again.items[i].cpm_scores == preds.items[i].cpm_scores);
      }
      const auto report = data::evaluate_predictions(test, preds);
      if (report.emotions) CHECK(report.emotions->micro_f1 > 0.5);
      if (report.components) CHECK(report.components->classes[0].f1 > 0.5);
    }
  }
  TEST_CASE("multi-label corpora use ten binary models") {
    auto corpus = data::load_corpus(std::string(EMOCPM_REPO_DATA_DIR) + "/synthetic/reman_synthetic.jsonl");
    std::vector<std::size_t> idx(150);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    LinearConfig cfg;
    cfg.maxent.iterations = 30;
    const auto p = LinearPipeline::train(LinearTag::EmoMeBase, corpus.subset(idx), {}, cfg);
    const auto preds = p.predict(corpus.subset(idx), {});
    CHECK(preds.mode == data::TaskMode::MultiLabel);
    CHECK(preds.items[0].emotion_scores.size() == 10);
  }
  TEST_CASE("checkpoint validation") {
    CHECK_THROWS_AS(LinearPipeline::from_json("{}"), DataError);
    CHECK_THROWS_AS(LinearPipeline::from_json("not json"), DataError);
  }
}
