#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emocpm/app/commands.hpp"
#include "emocpm/app/settings.hpp"
#include "emocpm/error.hpp"

namespace app = emocpm::app;

namespace {

struct Flags {
  std::string config;
  std::map<std::string, std::string> values;  // setting key -> flag value
  std::vector<std::string> sets;
  bool no_fallback = false;
};

void add_common(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config, "flat key = value settings file");
  struct Opt {
    const char* flag;
    const char* key;
    const char* help;
  };
  static const Opt opts[] = {
      {"--seed", "seed", "master seed"},
      {"--out", "out", "output directory"},
      {"--jobs", "jobs", "worker threads"},
      {"--profile", "profile", "reman or tec hyperparameter column"},
      {"--embeddings", "embeddings", "word vector file for the linear emb block"},
      {"--lexicons", "lexicons", "component lexicon directory"},
      {"--pos", "pos", "part-of-speech sidecar"},
      {"--appraisal", "appraisal", "appraisal sidecar"},
      {"--token-store", "token_store", "token-level input matrices for neural models"},
      {"--fallback-dim", "fallback_dim", "width of hashed fallback token vectors"},
      {"--ratio", "train_ratio", "training share for split and ablate"},
      {"--folds", "folds", "crossval folds"},
  };
  for (const auto& o : opts) cmd.add_option(o.flag, f.values[o.key], o.help);
  cmd.add_flag("--no-fallback", f.no_fallback, "fail on instances missing from the token store");
  cmd.add_option("--set", f.sets, "override any setting, KEY=VALUE (repeatable)");
}

app::RunOptions options_from(const Flags& f) {
  app::Settings file;
  if (!f.config.empty()) file = app::load_settings_file(f.config);
  const auto env = app::settings_from_env([](const char* name) { return std::getenv(name); });
  app::Settings flags;
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw emocpm::ConfigError("--set expects KEY=VALUE, got '" + s + "'");
    flags[s.substr(0, eq)] = s.substr(eq + 1);
  }
  for (const auto& [k, v] : f.values)
    if (!v.empty()) flags[k] = v;
  if (f.no_fallback) flags["fallback"] = "false";
  return app::resolve_options(app::merge(app::merge(file, env), flags));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Emotion and emotion-component classification toolkit"};
  cli.require_subcommand(1);
  Flags flags;
  std::vector<std::string> pos;
  std::map<std::string, std::function<void(const app::RunOptions&)>> actions;

  auto verb = [&](const char* name, const char* help, std::vector<const char*> args) {
    auto* cmd = cli.add_subcommand(name, help);
    add_common(*cmd, flags);
    cmd->add_option("args", pos, "")->required()->expected(static_cast<int>(args.size()));
    std::string usage;
    for (const auto* a : args) usage += std::string(" ") + a;
    cmd->usage(std::string("emocpm ") + name + usage + " [OPTIONS]");
    return cmd;
  };
  verb("stats", "component counts per emotion", {"CORPUS"});
  actions["stats"] = [&](const app::RunOptions& o) { app::cmd_stats(o, pos[0], std::cout); };
  verb("agreement", "Cohen's kappa per component between two annotation files", {"FIRST", "SECOND"});
  actions["agreement"] = [&](const app::RunOptions& o) { app::cmd_agreement(o, pos[0], pos[1], std::cout); };
  verb("split", "seeded train/test split", {"CORPUS"});
  actions["split"] = [&](const app::RunOptions& o) { app::cmd_split(o, pos[0], std::cout); };
  verb("train", "train a model and write its checkpoint", {"TAG", "CORPUS"});
  actions["train"] = [&](const app::RunOptions& o) { app::cmd_train(o, pos[0], pos[1], std::cout); };
  verb("eval", "score a checkpoint against a labelled corpus", {"MODEL", "CORPUS"});
  actions["eval"] = [&](const app::RunOptions& o) { app::cmd_eval(o, pos[0], pos[1], std::cout); };
  verb("predict", "write per-instance predictions", {"MODEL", "CORPUS"});
  actions["predict"] = [&](const app::RunOptions& o) { app::cmd_predict(o, pos[0], pos[1], std::cout); };
  verb("crossval", "k-fold cross-validation", {"TAG", "CORPUS"});
  actions["crossval"] = [&](const app::RunOptions& o) { app::cmd_crossval(o, pos[0], pos[1], std::cout); };
  verb("ablate", "feature-block search per component", {"CORPUS"});
  actions["ablate"] = [&](const app::RunOptions& o) { app::cmd_ablate(o, pos[0], std::cout); };
  verb("defaults", "print the settings file for a neural tag's defaults", {"TAG"});
  actions["defaults"] = [&](const app::RunOptions& o) {
    const auto t = emocpm::neural::parse_neural_tag(pos[0]);
    if (!t) throw emocpm::ConfigError("defaults: '" + pos[0] + "' is not a neural model tag");
    const auto cfg = app::model_config(o, *t, o.profile.value_or(emocpm::neural::Profile::Reman));
    for (const auto& [k, v] : emocpm::neural::config_items(cfg)) std::cout << k << " = " << v << '\n';
  };

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    const auto options = options_from(flags);
    actions.at(cli.get_subcommands().front()->get_name())(options);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return app::exit_code(e);
  }
  return 0;
}
