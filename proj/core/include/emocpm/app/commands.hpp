#pragma once

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "emocpm/app/settings.hpp"

namespace emocpm::app {

// The eleven model names accepted by train and crossval.
const std::vector<std::string>& model_tags();

// Each command writes its artifacts under options.out_dir, prints a short
// summary to `out`, and reports problems by throwing emocpm errors. All
// resources and the tag/corpus combination are checked before training.

// stats.tsv and stats.txt (component counts per emotion).
void cmd_stats(const RunOptions& options, const std::filesystem::path& corpus, std::ostream& out);
// agreement.tsv: kappa, p_o and p_e per component; "--" when undefined.
void cmd_agreement(const RunOptions& options, const std::filesystem::path& first,
                   const std::filesystem::path& second, std::ostream& out);
// train.jsonl and test.jsonl by options.train_ratio.
void cmd_split(const RunOptions& options, const std::filesystem::path& corpus, std::ostream& out);
// model.json, train.log (timestamp only in its first line), metrics on the
// training data, and epochs.tsv for neural models.
void cmd_train(const RunOptions& options, std::string_view tag, const std::filesystem::path& corpus,
               std::ostream& out);
// emotion_metrics.tsv / component_metrics.tsv for the heads the model has, plus metrics.json.
void cmd_eval(const RunOptions& options, const std::filesystem::path& model,
              const std::filesystem::path& corpus, std::ostream& out);
// predictions.jsonl.
void cmd_predict(const RunOptions& options, const std::filesystem::path& model,
                 const std::filesystem::path& corpus, std::ostream& out);
// crossval.tsv with one row per fold and head plus mean rows; per-fold
// metrics in fold_<k>_*.tsv.
void cmd_crossval(const RunOptions& options, std::string_view tag,
                  const std::filesystem::path& corpus, std::ostream& out);
// ablation.tsv (TF-IDF alone, each single block added, selected set) and
// ablation_scores.tsv (every subset) per component.
void cmd_ablate(const RunOptions& options, const std::filesystem::path& corpus, std::ostream& out);

// 1 usage/config, 2 data, 3 anything else.
int exit_code(const std::exception& e);

}  // namespace emocpm::app
