#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emocpm::data {

inline constexpr std::size_t kNumComponents = 5;

// Column order of every component vector in the toolkit.
inline constexpr std::array<std::string_view, kNumComponents> kComponentNames = {
    "cognitive_appraisal", "neurophysiological_symptoms", "action_tendencies",
    "motor_expressions", "subjective_feelings"};

inline constexpr std::size_t kCognitiveAppraisal = 0;
inline constexpr std::string_view kNeutral = "neutral";

using CpmFlags = std::array<std::uint8_t, kNumComponents>;
// Sorted label indices into an inventory.
using LabelSet = std::vector<std::size_t>;

enum class Domain { Tec, Reman, Other };
enum class TaskMode { SingleLabel, MultiLabel };

std::string_view to_string(Domain d);
std::string_view to_string(TaskMode m);
Domain parse_domain(std::string_view s);
TaskMode parse_task_mode(std::string_view s);

std::vector<std::string> tec_inventory();
std::vector<std::string> reman_inventory();
std::vector<std::string> component_inventory();

struct Instance {
  std::string id;
  std::string text;
  std::vector<std::string> emotions;  // in inventory order
  CpmFlags cpm{};
  Domain domain = Domain::Other;
};

struct Corpus {
  std::vector<Instance> instances;
  std::vector<std::string> inventory;
  TaskMode mode = TaskMode::SingleLabel;

  std::size_t size() const noexcept { return instances.size(); }
  bool empty() const noexcept { return instances.empty(); }
  std::optional<std::size_t> label_index(std::string_view label) const;
  bool has_neutral() const { return label_index(kNeutral).has_value(); }
  LabelSet emotion_labels(const Instance& inst) const;
  // Same inventory and mode, selected instances in the given order.
  Corpus subset(const std::vector<std::size_t>& indices) const;
};

LabelSet component_labels(const CpmFlags& cpm);

// Line-delimited JSON objects with id, text, emotions, cpm, domain. An
// optional first record {"header": true, "mode": ..., "inventory": [...]}
// declares the task mode and label inventory. Errors carry line numbers.
Corpus parse_corpus(std::istream& in, const std::string& source_name);
Corpus load_corpus(const std::filesystem::path& path);
void write_corpus(std::ostream& out, const Corpus& corpus, bool with_header = true);

}  // namespace emocpm::data
