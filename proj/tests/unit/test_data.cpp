#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "emocpm/data/agreement.hpp"
#include "emocpm/data/corpus.hpp"
#include "emocpm/data/metrics.hpp"
#include "emocpm/data/split.hpp"
#include "emocpm/data/stats.hpp"
#include "emocpm/error.hpp"
#include "emocpm/random.hpp"
#include "metrics_oracle.hpp"

using namespace emocpm;
using namespace emocpm::data;

namespace {

Corpus parse(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in, "mem");
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

std::vector<LabeledItem> items(const std::vector<LabelSet>& labels) {
  std::vector<LabeledItem> out;
  for (std::size_t i = 0; i < labels.size(); ++i) out.push_back({"i" + std::to_string(i), labels[i]});
  return out;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("tec record") {
    const auto c = parse(R"({"id":"t1","text":"Feelin a bit sad tonight","emotions":["sadness"],"cpm":[1,0,0,0,1],"domain":"tec"})");
    REQUIRE(c.size() == 1);
    CHECK(c.mode == TaskMode::SingleLabel);
    CHECK(c.inventory == tec_inventory());
    CHECK(c.instances[0].cpm == CpmFlags{1, 0, 0, 0, 1});
    CHECK(c.emotion_labels(c.instances[0]) == LabelSet{4});
  }
  TEST_CASE("reman empty emotions become neutral") {
    const auto c = parse(
        "{\"id\":\"r1\",\"text\":\"x\",\"emotions\":[],\"cpm\":[0,0,0,0,0],\"domain\":\"reman\"}\n"
        "{\"id\":\"r2\",\"text\":\"y\",\"emotions\":[\"trust\",\"fear\"],\"cpm\":[1,1,0,0,0],\"domain\":\"reman\"}\n");
    CHECK(c.mode == TaskMode::MultiLabel);
    CHECK(c.instances[0].emotions == std::vector<std::string>{"neutral"});
    CHECK(c.instances[1].emotions == std::vector<std::string>{"fear", "trust"});
  }
  TEST_CASE("errors carry line numbers") {
    const std::string ok = R"({"id":"a","emotions":["joy"],"cpm":[0,0,0,0,0],"domain":"tec"})";
    CHECK(parse_error_line(ok + "\n" + ok + "\n") == 2);
    CHECK(parse_error_line(ok + "\n\n" + R"({"id":"b","emotions":["glee"],"cpm":[0,0,0,0,0],"domain":"tec"})") == 3);
    CHECK(parse_error_line(R"({"id":"b","emotions":["joy"],"cpm":[0,0,0,0],"domain":"tec"})") == 1);
    CHECK(parse_error_line(R"({"id":"b","emotions":["joy"],"cpm":[0,0,2,0,0],"domain":"tec"})") == 1);
    CHECK(parse_error_line(R"({"id":"b","emotions":["joy","fear"],"cpm":[0,0,0,0,0],"domain":"tec"})") == 1);
    CHECK(parse_error_line(ok + "\n{not json") == 2);
    CHECK(parse_error_line(R"({"id":"b","emotions":["joy","joy"],"cpm":[0,0,0,0,0],"domain":"reman"})") == 1);
  }
  TEST_CASE("header declares mode and inventory") {
    const auto c = parse(
        "{\"header\":true,\"mode\":\"multi-label\",\"inventory\":[\"x\",\"y\"]}\n"
        "{\"id\":\"1\",\"emotions\":[\"y\",\"x\"],\"cpm\":[0,0,0,0,0],\"domain\":\"tec\"}\n"
        "{\"id\":\"2\",\"emotions\":[],\"cpm\":[0,0,0,0,0],\"domain\":\"reman\"}\n");
    CHECK(c.inventory == std::vector<std::string>{"x", "y"});
    CHECK(c.instances[1].emotions.empty());
  }
  TEST_CASE("mixed domains need a header") {
    CHECK_THROWS_AS(parse("{\"id\":\"1\",\"emotions\":[\"joy\"],\"cpm\":[0,0,0,0,0],\"domain\":\"tec\"}\n"
                          "{\"id\":\"2\",\"emotions\":[],\"cpm\":[0,0,0,0,0],\"domain\":\"reman\"}\n"),
                    ParseError);
  }
  TEST_CASE("write then parse round trips") {
    const auto c = parse(
        "{\"id\":\"r1\",\"text\":\"a \\\"q\\\"\",\"emotions\":[\"joy\",\"anger\"],\"cpm\":[1,0,1,0,0],\"domain\":\"reman\"}\n");
    std::ostringstream out;
    write_corpus(out, c);
    const auto r = parse(out.str());
    CHECK(r.inventory == c.inventory);
    CHECK(r.mode == c.mode);
    CHECK(r.instances[0].text == c.instances[0].text);
    CHECK(r.instances[0].emotions == c.instances[0].emotions);
  }
  TEST_CASE("missing file is a config error") {
    CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.jsonl"), ConfigError);
  }
}

TEST_SUITE("split") {
  TEST_CASE("sizes follow the floor rule") {
    auto s = split_indices(1000, 0.9, 1);
    CHECK(s.train.size() == 900);
    CHECK(s.test.size() == 100);
    s = split_indices(2041, 0.9, 1);
    CHECK(s.train.size() == 1837);
    CHECK(s.test.size() == 204);
    CHECK_THROWS_AS(split_indices(10, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(split_indices(10, 0.0, 1), ConfigError);
  }
  TEST_CASE("same seed same membership, partition for every seed") {
    CHECK(split_indices(500, 0.9, 42).test == split_indices(500, 0.9, 42).test);
    CHECK(split_indices(500, 0.9, 42).test != split_indices(500, 0.9, 43).test);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const std::size_t n = 1 + seed * 7;
      const auto s = split_indices(n, 0.8, seed);
      std::vector<std::size_t> all = s.train;
      all.insert(all.end(), s.test.begin(), s.test.end());
      std::sort(all.begin(), all.end());
      std::vector<std::size_t> expect(n);
      std::iota(expect.begin(), expect.end(), 0);
      CHECK(all == expect);
    }
  }
  TEST_CASE("kfold sizes and partition") {
    const auto f = kfold(2041, 10, 3);
    std::vector<std::size_t> sizes(10);
    for (auto id : f) ++sizes.at(id);
    CHECK(std::count(sizes.begin(), sizes.end(), 205) == 1);
    CHECK(std::count(sizes.begin(), sizes.end(), 204) == 9);
    std::size_t covered = 0;
    for (std::size_t k = 0; k < 10; ++k) {
      const auto s = fold_split(f, k);
      CHECK(s.train.size() + s.test.size() == 2041);
      covered += s.test.size();
    }
    CHECK(covered == 2041);
  }
  TEST_CASE("leave one out and bounds") {
    const auto f = kfold(7, 7, 9);
    CHECK(std::set<std::size_t>(f.begin(), f.end()).size() == 7);
    CHECK_THROWS_AS(kfold(5, 6, 1), ConfigError);
    CHECK_THROWS_AS(kfold(5, 1, 1), ConfigError);
  }
}

TEST_SUITE("metrics") {
  const std::vector<std::string> two = {"neg", "pos"};

  TEST_CASE("perfect predictions") {
    const auto g = items({{0}, {1}, {1}});
    const auto r = evaluate(g, g, two);
    CHECK(r.macro_f1 == 1.0);
    CHECK(r.micro_f1 == 1.0);
    for (const auto& c : r.classes) CHECK(c.precision == 1.0);
  }
  TEST_CASE("two thirds hand case") {
    // pos: TP=2 (i0,i1), FP=1 (i3), FN=1 (i2)
    const auto g = items({{1}, {1}, {1}, {}});
    const auto p = items({{1}, {1}, {}, {1}});
    const auto r = evaluate(g, p, two);
    CHECK(r.classes[1].tp == 2);
    CHECK(r.classes[1].fp == 1);
    CHECK(r.classes[1].fn == 1);
    CHECK(r.classes[1].precision == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(r.classes[1].recall == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(r.classes[1].f1 == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(r.classes[0].f1 == 0.0);
  }
  TEST_CASE("id mismatch") {
    auto g = items({{0}});
    auto p = items({{0}});
    p[0].id = "other";
    CHECK_THROWS_AS(evaluate(g, p, two), DataError);
    CHECK_THROWS_AS(evaluate(g, {}, two), DataError);
  }
  TEST_CASE("single-label micro F1 equals accuracy") {
    Rng rng(11);
    std::vector<LabelSet> g, p;
    std::size_t correct = 0;
    for (int i = 0; i < 300; ++i) {
      g.push_back({rng.below(6)});
      p.push_back({rng.below(6)});
      correct += g.back() == p.back();
    }
    const auto r = evaluate(items(g), items(p), std::vector<std::string>(6, "c"));
    CHECK(r.micro_f1 == doctest::Approx(correct / 300.0).epsilon(1e-12));
  }
  TEST_CASE("agrees with the brute-force oracle") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t C = 2 + rng.below(9);
      const std::size_t n = 1 + rng.below(40);
      const bool multi = trial % 2 == 1;
      std::vector<LabelSet> g(n), p(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (multi) {
          for (std::size_t c = 0; c < C; ++c) {
            if (rng.uniform() < 0.3) g[i].push_back(c);
            if (rng.uniform() < 0.3) p[i].push_back(c);
          }
        } else {
          g[i] = {rng.below(C)};
          p[i] = {rng.below(C)};
        }
      }
      const auto r = evaluate(items(g), items(p), std::vector<std::string>(C, "c"));
      const auto o = oracle::count_metrics(g, p, C);
      double mean_f1 = 0;
      for (std::size_t c = 0; c < C; ++c) {
        CHECK(r.classes[c].tp == static_cast<std::size_t>(o.tp[c]));
        CHECK(r.classes[c].fp == static_cast<std::size_t>(o.fp[c]));
        CHECK(r.classes[c].fn == static_cast<std::size_t>(o.fn[c]));
        CHECK(std::abs(r.classes[c].f1 - o.f1[c]) < 1e-12);
        mean_f1 += r.classes[c].f1;
      }
      CHECK(std::abs(r.macro_f1 - mean_f1 / C) < 1e-12);
      CHECK(std::abs(r.macro_f1 - o.macro_f1) < 1e-12);
      CHECK(std::abs(r.micro_f1 - o.micro_f1) < 1e-12);
    }
  }
  TEST_CASE("tsv and json output") {
    const auto r = evaluate(items({{1}, {0}}), items({{1}, {1}}), two);
    std::ostringstream tsv;
    write_metrics_tsv(tsv, r);
    CHECK(tsv.str().rfind("class\tP\tR\tF1\tsupport\n", 0) == 0);
    CHECK(tsv.str().find("pos\t0.5000\t1.0000\t0.6667\t1\n") != std::string::npos);
    CHECK(tsv.str().find("\nmicro\t") != std::string::npos);
    CHECK(metrics_json(r).find("\"macro\"") != std::string::npos);
  }
}

TEST_SUITE("kappa") {
  TEST_CASE("half agreement example") {
    const auto k = cohen_kappa({1, 1, 0, 0}, {1, 0, 0, 0});
    CHECK(std::abs(k.observed - 0.75) < 1e-12);
    CHECK(std::abs(k.expected - 0.5) < 1e-12);
    CHECK(std::abs(k.kappa - 0.5) < 1e-12);
    CHECK(k.defined);
  }
  TEST_CASE("perfect agreement") {
    CHECK(cohen_kappa({1, 0, 1, 1}, {1, 0, 1, 1}).kappa == 1.0);
    const auto none = cohen_kappa({0, 0, 0}, {0, 0, 0});
    CHECK(!none.defined);
    CHECK(none.kappa == 1.0);
  }
  TEST_CASE("symmetry and relabeling invariance") {
    Rng rng(8);
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 2 + rng.below(50);
      std::vector<std::uint8_t> a(n), b(n), na(n), nb(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = rng.below(2);
        b[i] = rng.below(2);
        na[i] = 1 - a[i];
        nb[i] = 1 - b[i];
      }
      const auto ab = cohen_kappa(a, b), ba = cohen_kappa(b, a), flipped = cohen_kappa(na, nb);
      CHECK(ab.defined == ba.defined);
      CHECK(std::abs(ab.kappa - ba.kappa) < 1e-12);
      CHECK(std::abs(ab.kappa - flipped.kappa) < 1e-12);
    }
  }
  TEST_CASE("errors") {
    CHECK_THROWS_AS(cohen_kappa({}, {}), DataError);
    CHECK_THROWS_AS(cohen_kappa({1}, {1, 0}), DataError);
  }
  TEST_CASE("files pair by id") {
    const auto dir = std::filesystem::temp_directory_path() / "emocpm_kappa_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "a.jsonl") << "{\"id\":\"1\",\"cpm\":[1,0,0,0,0]}\n{\"id\":\"2\",\"cpm\":[1,0,0,0,1]}\n"
                                   << "{\"id\":\"3\",\"cpm\":[0,0,0,0,0]}\n{\"id\":\"4\",\"cpm\":[0,0,0,0,1]}\n";
    std::ofstream(dir / "b.jsonl") << "{\"id\":\"4\",\"cpm\":[0,0,0,0,1]}\n{\"id\":\"3\",\"cpm\":[0,0,0,0,0]}\n"
                                   << "{\"id\":\"2\",\"cpm\":[0,0,0,0,1]}\n{\"id\":\"1\",\"cpm\":[1,0,0,0,0]}\n";
    const auto rec = load_agreement(dir / "a.jsonl", dir / "b.jsonl");
    CHECK(rec.ids.size() == 4);
    const auto k = component_kappas(rec);
    CHECK(std::abs(k[0].kappa - 0.5) < 1e-12);
    CHECK(!k[1].defined);
    CHECK(k[4].kappa == 1.0);
    std::ofstream(dir / "c.jsonl") << "{\"id\":\"9\",\"cpm\":[0,0,0,0,1]}\n";
    CHECK_THROWS_AS(load_agreement(dir / "a.jsonl", dir / "c.jsonl"), LookupError);
    std::filesystem::remove_all(dir);
  }
}

TEST_SUITE("stats") {
  TEST_CASE("counts and rounding") {
    CHECK(rounded_percent(127.0 / 169) == 75);
    CHECK(rounded_percent(0.125) == 13);
    CHECK(rounded_percent(0.005) == 1);
    CHECK(rounded_percent(0.0) == 0);
    const auto c = parse(
        "{\"id\":\"1\",\"emotions\":[\"joy\"],\"cpm\":[1,0,0,0,1],\"domain\":\"tec\"}\n"
        "{\"id\":\"2\",\"emotions\":[\"joy\"],\"cpm\":[1,1,0,0,0],\"domain\":\"tec\"}\n"
        "{\"id\":\"3\",\"emotions\":[\"fear\"],\"cpm\":[0,0,0,0,1],\"domain\":\"tec\"}\n");
    const auto t = cooccurrence_stats(c);
    CHECK(t.instances == 3);
    CHECK(t.rows[3].emotion == "joy");
    CHECK(t.rows[3].counts[0] == 2);
    CHECK(t.rows[3].total == 2);
    CHECK(t.rows[2].counts[4] == 1);
    CHECK(t.component_totals[4] == 2);
    CHECK(t.component_fractions[0] == doctest::Approx(2.0 / 3));
  }
  TEST_CASE("multi-label rows count every label, totals count instances once") {
    const auto c = parse(
        "{\"id\":\"1\",\"emotions\":[\"joy\",\"fear\"],\"cpm\":[1,0,0,0,0],\"domain\":\"reman\"}\n"
        "{\"id\":\"2\",\"emotions\":[],\"cpm\":[0,0,0,1,0],\"domain\":\"reman\"}\n");
    const auto t = cooccurrence_stats(c);
    CHECK(t.rows[*c.label_index("joy")].counts[0] == 1);
    CHECK(t.rows[*c.label_index("fear")].counts[0] == 1);
    CHECK(t.rows[*c.label_index("neutral")].counts[3] == 1);
    CHECK(t.component_totals[0] == 1);
    CHECK(t.component_fractions[0] == 0.5);
  }
  TEST_CASE("matches a per-instance brute-force scan") {
    Rng rng(77);
    Corpus c;
    c.inventory = reman_inventory();
    c.mode = TaskMode::MultiLabel;
    for (int i = 0; i < 400; ++i) {
      Instance inst{"x" + std::to_string(i), "", {}, {}, Domain::Reman};
      for (const auto& e : c.inventory)
        if (rng.uniform() < 0.2) inst.emotions.push_back(e);
      for (auto& f : inst.cpm) f = rng.below(2);
      c.instances.push_back(inst);
    }
    const auto t = cooccurrence_stats(c);
    for (std::size_t e = 0; e < c.inventory.size(); ++e) {
      for (std::size_t k = 0; k < kNumComponents; ++k) {
        std::size_t hits = 0, total = 0;
        for (const auto& inst : c.instances) {
          const bool has = std::find(inst.emotions.begin(), inst.emotions.end(), c.inventory[e]) !=
                           inst.emotions.end();
          total += has;
          hits += has && inst.cpm[k];
        }
        CHECK(t.rows[e].counts[k] == hits);
        CHECK(t.rows[e].total == total);
        if (total > 0) CHECK(std::abs(t.rows[e].fractions[k] - double(hits) / total) < 1e-15);
      }
    }
  }
  TEST_CASE("empty corpus") {
    Corpus c;
    c.inventory = tec_inventory();
    const auto t = cooccurrence_stats(c);
    CHECK(t.instances == 0);
    for (const auto& r : t.rows) CHECK(r.total == 0);
    std::ostringstream out;
    write_stats_text(out, t);
    CHECK(out.str() == "0 instances\n");
  }
  TEST_CASE("text rendering shows count and percent") {
    const auto c = parse("{\"id\":\"1\",\"emotions\":[\"anger\"],\"cpm\":[1,0,0,0,0],\"domain\":\"tec\"}\n");
    std::ostringstream out;
    write_stats_text(out, cooccurrence_stats(c));
    CHECK(out.str().find("1 (100%)") != std::string::npos);
    std::ostringstream tsv;
    write_stats_tsv(tsv, cooccurrence_stats(c));
    CHECK(tsv.str().find("\nanger\t1\t100\t0\t0") != std::string::npos);
  }
}
