#include "emocpm/app/commands.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "emocpm/data/agreement.hpp"
#include "emocpm/data/corpus.hpp"
#include "emocpm/data/metrics.hpp"
#include "emocpm/data/prediction.hpp"
#include "emocpm/data/split.hpp"
#include "emocpm/data/stats.hpp"
#include "emocpm/error.hpp"
#include "emocpm/linear/pipeline.hpp"
#include "emocpm/linear/search.hpp"
#include "emocpm/neural/train.hpp"
#include "emocpm/random.hpp"
#include "emocpm/text/embeddings.hpp"
#include "emocpm/text/lexicon.hpp"

namespace emocpm::app {

namespace fs = std::filesystem;

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

fs::path prepare_out(const RunOptions& o) {
  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + o.out_dir.string() + ": " + ec.message());
  return o.out_dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << text;
  if (!f) throw Error("failed writing " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Resources {
  std::vector<text::DictionaryLexicon> lexicons;
  std::optional<linear::PosSidecar> pos;
  std::optional<text::EmbeddingTable> embeddings;
  std::optional<linear::AppraisalSidecar> appraisal;
  std::optional<text::TokenEmbeddingStore> store;

  linear::FeatureResources view() const {
    linear::FeatureResources r;
    if (!lexicons.empty()) r.lexicons = &lexicons;
    if (pos) r.pos = &*pos;
    if (embeddings) r.embeddings = &*embeddings;
    if (appraisal) r.appraisal = &*appraisal;
    return r;
  }
};

Resources load_resources(const RunOptions& o, bool linear_blocks, bool token_store) {
  Resources r;
  if (linear_blocks) {
    if (o.lexicons) {
      r.lexicons = text::load_lexicon_dir(*o.lexicons);
    } else if (fs::is_directory(text::default_lexicon_dir())) {
      r.lexicons = text::load_lexicon_dir(text::default_lexicon_dir());
    }
    if (o.pos) r.pos = linear::load_pos_sidecar(*o.pos);
    if (o.embeddings) r.embeddings = text::load_embedding_file(*o.embeddings);
    if (o.appraisal) r.appraisal = linear::load_appraisal_sidecar(*o.appraisal);
  }
  if (token_store && o.token_store) r.store = text::load_token_embedding_store(*o.token_store);
  return r;
}

struct Tag {
  std::optional<linear::LinearTag> linear;
  std::optional<neural::NeuralTag> neural;
  std::string name;
};

Tag parse_tag(std::string_view name) {
  Tag t;
  t.name = std::string(name);
  t.linear = linear::parse_linear_tag(name);
  t.neural = neural::parse_neural_tag(name);
  if (!t.linear && !t.neural) {
    std::string all;
    for (const auto& n : model_tags()) all += (all.empty() ? "" : ", ") + n;
    throw ConfigError("unknown model tag '" + t.name + "' (expected one of " + all + ")");
  }
  return t;
}

neural::Profile resolve_profile(const RunOptions& o, const data::Corpus& corpus) {
  const auto implied = corpus.mode == data::TaskMode::MultiLabel ? neural::Profile::Reman : neural::Profile::Tec;
  if (o.profile && *o.profile != implied) {
    throw ConfigError("profile " + std::string(neural::to_string(*o.profile)) + " expects a " +
                      (implied == neural::Profile::Reman ? "single-label" : "multi-label") +
                      " corpus, got " + std::string(data::to_string(corpus.mode)));
  }
  return implied;
}

std::vector<Matrix> neural_inputs(const data::Corpus& corpus, const text::TokenEmbeddingStore* store,
                                  const text::FallbackEmbedding& fallback) {
  if (store && fallback.enabled && store->dimension != fallback.dimension) {
    throw ConfigError("token store has dimension " + std::to_string(store->dimension) +
                      " but fallback_dim is " + std::to_string(fallback.dimension));
  }
  return text::resolve_token_embeddings(corpus, store, fallback);
}

struct Trained {
  std::optional<linear::LinearPipeline> linear;
  std::optional<neural::NeuralModel> neural;
  std::vector<std::string> log;
  std::vector<neural::EpochRecord> epochs;
};

linear::LinearConfig linear_config(const RunOptions& o, std::uint64_t seed, std::size_t jobs) {
  linear::LinearConfig cfg;
  cfg.maxent = o.maxent;
  cfg.dev_fraction = o.linear_dev_fraction;
  cfg.seed = seed;
  cfg.jobs = jobs;
  return cfg;
}

void log_config(std::vector<std::string>& log, const std::string& prefix, const neural::ModelConfig& c) {
  for (const auto& [k, v] : neural::config_items(c)) log.push_back(prefix + k + "=" + v);
}

std::string epoch_line(const neural::EpochRecord& r) {
  return "epoch " + std::to_string(r.epoch) + " loss=" + fixed(r.train_loss) +
         (r.dev_macro_f1 ? " dev_macro_f1=" + fixed(*r.dev_macro_f1) : "");
}

// Checks everything that can be checked without training.
struct Plan {
  Tag tag;
  neural::Profile profile;
  std::optional<neural::ModelConfig> config, sub_config;
};

Plan plan_training(const RunOptions& o, std::string_view tag_name, const data::Corpus& corpus) {
  Plan p{parse_tag(tag_name), resolve_profile(o, corpus), {}, {}};
  if (corpus.size() == 0) throw DataError("corpus has no instances");
  if (p.tag.neural) {
    p.config = model_config(o, *p.tag.neural, p.profile);
    if (*p.tag.neural == neural::NeuralTag::EmoCpmNnPred) p.sub_config = submodel_config(o, *p.config, p.profile);
  }
  return p;
}

Trained train_model(const Plan& plan, const data::Corpus& corpus, const RunOptions& o,
                    const Resources& res, const std::vector<Matrix>* inputs, std::uint64_t seed,
                    std::size_t jobs) {
  Trained t;
  t.log.push_back("tag=" + plan.tag.name);
  t.log.push_back("profile=" + std::string(neural::to_string(plan.profile)));
  t.log.push_back("seed=" + std::to_string(seed));
  t.log.push_back("instances=" + std::to_string(corpus.size()));
  if (plan.tag.linear) {
    const auto cfg = linear_config(o, seed, jobs);
    t.log.push_back("maxent_iterations=" + std::to_string(cfg.maxent.iterations));
    t.log.push_back("maxent_learning_rate=" + fixed(cfg.maxent.learning_rate, 6));
    t.log.push_back("maxent_l2=" + fixed(cfg.maxent.l2, 6));
    auto model = linear::LinearPipeline::train(*plan.tag.linear, corpus, res.view(), cfg);
    for (const auto& s : model.searches()) {
      t.log.push_back("search component=" + std::string(data::kComponentNames[s.component]) +
                      " best=" + s.best.name() + " dev_f1=" + fixed(s.best_f1));
    }
    for (const auto& w : model.warnings()) t.log.push_back("warning " + w);
    t.linear = std::move(model);
    return t;
  }

  auto cfg = *plan.config;
  cfg.seed = seed;
  neural::TrainOptions opts;
  std::optional<neural::TrainResult> sub;
  if (plan.sub_config) {
    auto sub_cfg = *plan.sub_config;
    sub_cfg.seed = seed;
    log_config(t.log, "sub.", sub_cfg);
    neural::TrainOptions sub_opts;
    sub_opts.on_epoch = [&](const neural::EpochRecord& r) { t.log.push_back("sub." + epoch_line(r)); };
    sub = neural::train_neural(neural::NeuralTag::CpmNnBase, corpus, *inputs, sub_cfg, sub_opts);
    t.log.push_back("sub.best_epoch=" + std::to_string(sub->log.best_epoch));
    opts.submodel = &sub->model;
  }
  log_config(t.log, "", cfg);
  opts.on_epoch = [&](const neural::EpochRecord& r) {
    t.log.push_back(epoch_line(r));
    t.epochs.push_back(r);
  };
  auto result = neural::train_neural(*plan.tag.neural, corpus, *inputs, cfg, opts);
  t.log.push_back("train_size=" + std::to_string(result.log.train_size));
  t.log.push_back("dev_size=" + std::to_string(result.log.dev_size));
  t.log.push_back("best_epoch=" + std::to_string(result.log.best_epoch));
  result.model.input_fallback = o.fallback;
  result.model.input_fallback.seed = o.fallback.seed;
  if (o.token_store) result.model.input_store = o.token_store->string();
  t.neural = std::move(result.model);
  return t;
}

data::PredictionSet predict_with(const Trained& t, const data::Corpus& corpus, const Resources& res,
                                 const std::vector<Matrix>* inputs) {
  if (t.linear) return t.linear->predict(corpus, res.view());
  return t.neural->predict(corpus, *inputs);
}

void write_reports(const fs::path& dir, const std::string& prefix, const data::EvaluationReport& r) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  if (r.emotions) {
    std::ostringstream ss;
    data::write_metrics_tsv(ss, *r.emotions);
    write_file(dir / (prefix + "emotion_metrics.tsv"), ss.str());
    j["emotions"] = nlohmann::ordered_json::parse(data::metrics_json(*r.emotions));
  }
  if (r.components) {
    std::ostringstream ss;
    data::write_metrics_tsv(ss, *r.components);
    write_file(dir / (prefix + "component_metrics.tsv"), ss.str());
    j["components"] = nlohmann::ordered_json::parse(data::metrics_json(*r.components));
  }
  write_file(dir / (prefix + "metrics.json"), j.dump(2) + "\n");
}

void summarize(std::ostream& out, const data::EvaluationReport& r) {
  if (r.emotions)
    out << "emotions    macro-F1 " << fixed(r.emotions->macro_f1, 4) << "  micro-F1 "
        << fixed(r.emotions->micro_f1, 4) << '\n';
  if (r.components)
    out << "components  macro-F1 " << fixed(r.components->macro_f1, 4) << "  micro-F1 "
        << fixed(r.components->micro_f1, 4) << '\n';
}

struct LoadedModel {
  Trained model;
  bool neural = false;
};

LoadedModel load_model(const fs::path& path) {
  const auto text = read_file(path);
  std::string format;
  try {
    format = nlohmann::json::parse(text).value("format", "");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": not a model checkpoint: " + e.what());
  }
  LoadedModel m;
  if (format == "emocpm-linear") {
    m.model.linear = linear::LinearPipeline::from_json(text);
  } else if (format == "emocpm-neural") {
    m.model.neural = neural::NeuralModel::from_json(text);
    m.neural = true;
  } else {
    throw DataError(path.string() + ": unknown checkpoint format '" + format + "'");
  }
  return m;
}

std::vector<Matrix> inference_inputs(const RunOptions& o, const neural::NeuralModel& model,
                                     const data::Corpus& corpus, Resources& res) {
  if (!res.store && !o.token_store && model.input_store && fs::exists(*model.input_store)) {
    res.store = text::load_token_embedding_store(*model.input_store);
  }
  auto inputs = neural_inputs(corpus, res.store ? &*res.store : nullptr, model.input_fallback);
  for (const auto& m : inputs) {
    if (m.cols != model.network().input_dim()) {
      throw DataError("input vectors have " + std::to_string(m.cols) + " dimensions, model expects " +
                      std::to_string(model.network().input_dim()));
    }
  }
  return inputs;
}

void check_model_corpus(const Trained& t, const data::Corpus& corpus) {
  const auto& inv = t.linear ? t.linear->inventory() : t.neural->inventory();
  const auto mode = t.linear ? t.linear->mode() : t.neural->mode();
  neural::check_compatible(corpus, inv, mode);
}

}  // namespace

const std::vector<std::string>& model_tags() {
  static const std::vector<std::string> tags = {
      "emo-me-base", "cpm-me-base",     "cpm-me-adv",      "emo-cpm-me-pred", "emo-cpm-me-gold", "emo-nn-base",
      "cpm-nn-base", "emo-cpm-nn-pred", "emo-cpm-nn-gold", "mtl-mh",          "mtl-xs"};
  return tags;
}

void cmd_stats(const RunOptions& o, const fs::path& corpus_path, std::ostream& out) {
  const auto corpus = data::load_corpus(corpus_path);
  const auto dir = prepare_out(o);
  const auto table = data::cooccurrence_stats(corpus);
  std::ostringstream tsv, txt;
  data::write_stats_tsv(tsv, table);
  data::write_stats_text(txt, table);
  write_file(dir / "stats.tsv", tsv.str());
  write_file(dir / "stats.txt", txt.str());
  out << txt.str();
}

void cmd_agreement(const RunOptions& o, const fs::path& first, const fs::path& second, std::ostream& out) {
  const auto record = data::load_agreement(first, second);
  const auto dir = prepare_out(o);
  const auto kappas = data::component_kappas(record);
  std::ostringstream tsv;
  tsv << "component\tkappa\tp_o\tp_e\n";
  for (std::size_t c = 0; c < data::kNumComponents; ++c) {
    const auto& k = kappas[c];
    tsv << data::kComponentNames[c] << '\t' << (k.defined ? fixed(k.kappa, 4) : "--") << '\t'
        << fixed(k.observed, 4) << '\t' << fixed(k.expected, 4) << '\n';
  }
  write_file(dir / "agreement.tsv", tsv.str());
  out << record.ids.size() << " paired instances\n" << tsv.str();
}

void cmd_split(const RunOptions& o, const fs::path& corpus_path, std::ostream& out) {
  const auto corpus = data::load_corpus(corpus_path);
  const auto dir = prepare_out(o);
  const auto [train, test] = data::split_train_test(corpus, o.train_ratio, o.seed);
  std::ostringstream a, b;
  data::write_corpus(a, train);
  data::write_corpus(b, test);
  write_file(dir / "train.jsonl", a.str());
  write_file(dir / "test.jsonl", b.str());
  out << "train\t" << train.size() << "\ntest\t" << test.size() << '\n';
}

void cmd_train(const RunOptions& o, std::string_view tag, const fs::path& corpus_path, std::ostream& out) {
  parse_tag(tag);
  const auto corpus = data::load_corpus(corpus_path);
  const auto plan = plan_training(o, tag, corpus);
  auto res = load_resources(o, plan.tag.linear.has_value(), plan.tag.neural.has_value());
  std::optional<std::vector<Matrix>> inputs;
  if (plan.tag.neural) inputs = neural_inputs(corpus, res.store ? &*res.store : nullptr, o.fallback);
  const auto dir = prepare_out(o);
  const std::string started = utc_timestamp();

  auto trained = train_model(plan, corpus, o, res, inputs ? &*inputs : nullptr, o.seed, o.jobs);
  const auto report = data::evaluate_predictions(corpus, predict_with(trained, corpus, res, inputs ? &*inputs : nullptr));

  write_file(dir / "model.json", trained.linear ? trained.linear->to_json() : trained.neural->to_json());
  std::string log = "# emocpm train " + started + "\n";
  log += "corpus=" + corpus_path.filename().string() + "\n";
  for (const auto& line : trained.log) log += line + "\n";
  write_file(dir / "train.log", log);
  if (trained.neural) {
    std::string ep = "epoch\ttrain_loss\tdev_macro_f1\tdev_micro_f1\n";
    for (const auto& r : trained.epochs) {
      ep += std::to_string(r.epoch) + "\t" + fixed(r.train_loss) + "\t" +
            (r.dev_macro_f1 ? fixed(*r.dev_macro_f1) : "--") + "\t" +
            (r.dev_micro_f1 ? fixed(*r.dev_micro_f1) : "--") + "\n";
    }
    write_file(dir / "epochs.tsv", ep);
  }
  write_reports(dir, "train_", report);
  out << "trained " << plan.tag.name << " on " << corpus.size() << " instances\n";
  summarize(out, report);
  out << "model written to " << (dir / "model.json").string() << '\n';
}

void cmd_eval(const RunOptions& o, const fs::path& model_path, const fs::path& corpus_path, std::ostream& out) {
  auto loaded = load_model(model_path);
  const auto corpus = data::load_corpus(corpus_path);
  check_model_corpus(loaded.model, corpus);
  auto res = load_resources(o, !loaded.neural, loaded.neural);
  std::optional<std::vector<Matrix>> inputs;
  if (loaded.neural) inputs = inference_inputs(o, *loaded.model.neural, corpus, res);
  const auto dir = prepare_out(o);
  const auto report = data::evaluate_predictions(
      corpus, predict_with(loaded.model, corpus, res, inputs ? &*inputs : nullptr));
  write_reports(dir, "", report);
  out << corpus.size() << " instances\n";
  summarize(out, report);
}

void cmd_predict(const RunOptions& o, const fs::path& model_path, const fs::path& corpus_path,
                 std::ostream& out) {
  auto loaded = load_model(model_path);
  const auto corpus = data::load_corpus(corpus_path);
  check_model_corpus(loaded.model, corpus);
  auto res = load_resources(o, !loaded.neural, loaded.neural);
  std::optional<std::vector<Matrix>> inputs;
  if (loaded.neural) inputs = inference_inputs(o, *loaded.model.neural, corpus, res);
  const auto dir = prepare_out(o);
  const auto preds = predict_with(loaded.model, corpus, res, inputs ? &*inputs : nullptr);
  std::ostringstream ss;
  data::write_predictions(ss, preds);
  write_file(dir / "predictions.jsonl", ss.str());
  out << preds.items.size() << " predictions written to " << (dir / "predictions.jsonl").string() << '\n';
}

void cmd_crossval(const RunOptions& o, std::string_view tag, const fs::path& corpus_path, std::ostream& out) {
  parse_tag(tag);
  const auto corpus = data::load_corpus(corpus_path);
  const auto plan = plan_training(o, tag, corpus);
  if (o.folds > corpus.size())
    throw ConfigError("folds (" + std::to_string(o.folds) + ") exceed the corpus size " + std::to_string(corpus.size()));
  auto res = load_resources(o, plan.tag.linear.has_value(), plan.tag.neural.has_value());
  std::optional<std::vector<Matrix>> inputs;
  if (plan.tag.neural) inputs = neural_inputs(corpus, res.store ? &*res.store : nullptr, o.fallback);
  const auto dir = prepare_out(o);

  const auto assignment = data::kfold(corpus.size(), o.folds, o.seed);
  std::vector<data::EvaluationReport> reports(o.folds);
  std::vector<std::exception_ptr> errors(o.folds);
  auto run_fold = [&](std::size_t f) {
    try {
      const auto split = data::fold_split(assignment, f);
      const auto train = corpus.subset(split.train);
      const auto test = corpus.subset(split.test);
      std::optional<std::vector<Matrix>> train_in, test_in;
      if (inputs) {
        train_in.emplace();
        test_in.emplace();
        for (auto i : split.train) train_in->push_back((*inputs)[i]);
        for (auto i : split.test) test_in->push_back((*inputs)[i]);
      }
      const auto seed = derive_seed(o.seed, f);
      const auto model = train_model(plan, train, o, res, train_in ? &*train_in : nullptr, seed, 1);
      reports[f] = data::evaluate_predictions(test, predict_with(model, test, res, test_in ? &*test_in : nullptr));
    } catch (...) {
      errors[f] = std::current_exception();
    }
  };
  const std::size_t workers = std::min(o.jobs, o.folds);
  std::vector<std::thread> pool;
  std::size_t next = 0;
  std::mutex m;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t f;
        {
          std::lock_guard lock(m);
          if (next >= o.folds) return;
          f = next++;
        }
        run_fold(f);
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::ostringstream tsv;
  tsv << "fold\thead\tmacro_P\tmacro_R\tmacro_F1\tmicro_P\tmicro_R\tmicro_F1\n";
  auto row = [&](const std::string& fold, const char* head, const std::array<double, 6>& v) {
    tsv << fold << '\t' << head;
    for (double x : v) tsv << '\t' << fixed(x, 4);
    tsv << '\n';
  };
  auto values = [](const data::MetricsReport& r) {
    return std::array<double, 6>{r.macro_precision, r.macro_recall, r.macro_f1,
                                 r.micro_precision, r.micro_recall, r.micro_f1};
  };
  std::array<double, 6> emo_sum{}, cpm_sum{};
  for (std::size_t f = 0; f < o.folds; ++f) {
    const auto& r = reports[f];
    char name[16];
    std::snprintf(name, sizeof name, "fold_%02zu_", f + 1);
    write_reports(dir, name, r);
    if (r.emotions) {
      const auto v = values(*r.emotions);
      row(std::to_string(f + 1), "emotions", v);
      for (std::size_t i = 0; i < 6; ++i) emo_sum[i] += v[i];
    }
    if (r.components) {
      const auto v = values(*r.components);
      row(std::to_string(f + 1), "components", v);
      for (std::size_t i = 0; i < 6; ++i) cpm_sum[i] += v[i];
    }
  }
  const double k = static_cast<double>(o.folds);
  if (reports[0].emotions) {
    for (auto& x : emo_sum) x /= k;
    row("mean", "emotions", emo_sum);
  }
  if (reports[0].components) {
    for (auto& x : cpm_sum) x /= k;
    row("mean", "components", cpm_sum);
  }
  write_file(dir / "crossval.tsv", tsv.str());
  out << tsv.str();
}

void cmd_ablate(const RunOptions& o, const fs::path& corpus_path, std::ostream& out) {
  const auto corpus = data::load_corpus(corpus_path);
  if (corpus.size() < 2) throw DataError("ablate needs at least two instances");
  const auto res = load_resources(o, true, false);
  const auto dir = prepare_out(o);
  const auto [train, dev] = data::split_train_test(corpus, o.train_ratio, o.seed);
  if (dev.size() == 0) throw ConfigError("train_ratio leaves no dev instances");
  std::vector<linear::ComponentSearch> searches;
  for (std::size_t c = 0; c < data::kNumComponents; ++c)
    searches.push_back(linear::feature_combination_search(train, dev, c, res.view(), o.maxent));

  std::ostringstream table, scores;
  linear::write_ablation_tsv(table, searches);
  scores << "component\tcombination\tP\tR\tF1\n";
  for (const auto& s : searches)
    for (const auto& sc : s.scores)
      scores << data::kComponentNames[s.component] << '\t' << sc.combination.name() << '\t'
             << fixed(sc.dev_precision, 4) << '\t' << fixed(sc.dev_recall, 4) << '\t'
             << fixed(sc.dev_f1, 4) << '\n';
  write_file(dir / "ablation.tsv", table.str());
  write_file(dir / "ablation_scores.tsv", scores.str());
  out << table.str();
}

int exit_code(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 1;
  if (dynamic_cast<const DataError*>(&e)) return 2;
  return 3;
}

}  // namespace emocpm::app
