#include "emocpm/data/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "emocpm/error.hpp"

namespace emocpm::data {

using nlohmann::json;

std::string_view to_string(Domain d) {
  switch (d) {
    case Domain::Tec: return "tec";
    case Domain::Reman: return "reman";
    case Domain::Other: return "other";
  }
  return "other";
}

std::string_view to_string(TaskMode m) {
  return m == TaskMode::SingleLabel ? "single-label" : "multi-label";
}

Domain parse_domain(std::string_view s) {
  if (s == "tec") return Domain::Tec;
  if (s == "reman") return Domain::Reman;
  if (s == "other") return Domain::Other;
  throw DataError("unknown domain '" + std::string(s) + "'");
}

TaskMode parse_task_mode(std::string_view s) {
  if (s == "single-label" || s == "single") return TaskMode::SingleLabel;
  if (s == "multi-label" || s == "multi") return TaskMode::MultiLabel;
  throw DataError("unknown task mode '" + std::string(s) + "'");
}

std::vector<std::string> tec_inventory() {
  return {"anger", "disgust", "fear", "joy", "sadness", "surprise"};
}

std::vector<std::string> reman_inventory() {
  return {"anger", "anticipation", "disgust", "fear",     "joy",
          "neutral", "other",      "sadness", "surprise", "trust"};
}

std::vector<std::string> component_inventory() {
  return {kComponentNames.begin(), kComponentNames.end()};
}

std::optional<std::size_t> Corpus::label_index(std::string_view label) const {
  const auto it = std::find(inventory.begin(), inventory.end(), label);
  if (it == inventory.end()) return std::nullopt;
  return static_cast<std::size_t>(it - inventory.begin());
}

LabelSet Corpus::emotion_labels(const Instance& inst) const {
  LabelSet out;
  for (const auto& e : inst.emotions) {
    const auto idx = label_index(e);
    if (!idx) throw DataError("instance " + inst.id + ": label '" + e + "' not in inventory");
    out.push_back(*idx);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Corpus Corpus::subset(const std::vector<std::size_t>& indices) const {
  Corpus out;
  out.inventory = inventory;
  out.mode = mode;
  out.instances.reserve(indices.size());
  for (std::size_t i : indices) out.instances.push_back(instances.at(i));
  return out;
}

LabelSet component_labels(const CpmFlags& cpm) {
  LabelSet out;
  for (std::size_t c = 0; c < kNumComponents; ++c)
    if (cpm[c]) out.push_back(c);
  return out;
}

namespace {

struct RawRecord {
  Instance inst;
  std::size_t line = 0;
};

Instance parse_instance(const json& j, const std::string& source, std::size_t line) {
  auto fail = [&](const std::string& what) -> ParseError { return ParseError(source, line, what); };
  if (!j.is_object()) throw fail("record is not a JSON object");
  Instance inst;
  if (!j.contains("id")) throw fail("record has no id");
  const auto& id = j.at("id");
  if (id.is_string()) {
    inst.id = id.get<std::string>();
  } else if (id.is_number_integer()) {
    inst.id = std::to_string(id.get<long long>());
  } else {
    throw fail("id must be a string or integer");
  }
  if (inst.id.empty()) throw fail("empty id");
  if (j.contains("text")) {
    if (!j.at("text").is_string()) throw fail("text must be a string");
    inst.text = j.at("text").get<std::string>();
  }
  if (j.contains("emotions")) {
    const auto& e = j.at("emotions");
    if (!e.is_array()) throw fail("emotions must be an array");
    for (const auto& label : e) {
      if (!label.is_string()) throw fail("emotion labels must be strings");
      inst.emotions.push_back(label.get<std::string>());
    }
  }
  if (!j.contains("cpm")) throw fail("record has no cpm field");
  const auto& cpm = j.at("cpm");
  if (!cpm.is_array() || cpm.size() != kNumComponents) {
    throw fail("cpm must be an array of " + std::to_string(kNumComponents) + " flags");
  }
  for (std::size_t c = 0; c < kNumComponents; ++c) {
    if (!cpm[c].is_number_integer() || (cpm[c].get<int>() != 0 && cpm[c].get<int>() != 1)) {
      throw fail("cpm flags must be 0 or 1");
    }
    inst.cpm[c] = static_cast<std::uint8_t>(cpm[c].get<int>());
  }
  if (j.contains("domain")) {
    if (!j.at("domain").is_string()) throw fail("domain must be a string");
    try {
      inst.domain = parse_domain(j.at("domain").get<std::string>());
    } catch (const DataError& e) {
      throw fail(e.what());
    }
  }
  return inst;
}

}  // namespace

Corpus parse_corpus(std::istream& in, const std::string& source_name) {
  std::optional<TaskMode> declared_mode;
  std::optional<std::vector<std::string>> declared_inventory;
  std::vector<RawRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source_name, lineno, std::string("invalid JSON: ") + e.what());
    }
    if (j.is_object() && j.value("header", false)) {
      if (!records.empty()) throw ParseError(source_name, lineno, "header must precede records");
      try {
        if (j.contains("mode")) declared_mode = parse_task_mode(j.at("mode").get<std::string>());
        if (j.contains("inventory"))
          declared_inventory = j.at("inventory").get<std::vector<std::string>>();
      } catch (const json::exception& e) {
        throw ParseError(source_name, lineno, std::string("bad header: ") + e.what());
      } catch (const DataError& e) {
        throw ParseError(source_name, lineno, e.what());
      }
      continue;
    }
    records.push_back({parse_instance(j, source_name, lineno), lineno});
  }

  std::set<Domain> domains;
  for (const auto& r : records) domains.insert(r.inst.domain);
  if (domains.size() > 1 && !(declared_mode && declared_inventory)) {
    throw ParseError(source_name, records.back().line,
                     "records mix domains; declare mode and inventory in a header");
  }
  const Domain domain = domains.empty() ? Domain::Other : *domains.begin();

  Corpus corpus;
  if (declared_inventory) {
    corpus.inventory = *declared_inventory;
  } else if (domain == Domain::Tec) {
    corpus.inventory = tec_inventory();
  } else if (domain == Domain::Reman) {
    corpus.inventory = reman_inventory();
  } else {
    std::set<std::string> seen;
    for (const auto& r : records) seen.insert(r.inst.emotions.begin(), r.inst.emotions.end());
    corpus.inventory.assign(seen.begin(), seen.end());
  }

  if (declared_mode) {
    corpus.mode = *declared_mode;
  } else if (domain == Domain::Tec) {
    corpus.mode = TaskMode::SingleLabel;
  } else if (domain == Domain::Reman) {
    corpus.mode = TaskMode::MultiLabel;
  } else {
    const bool all_single = std::all_of(records.begin(), records.end(),
                                        [](const RawRecord& r) { return r.inst.emotions.size() == 1; });
    corpus.mode = all_single ? TaskMode::SingleLabel : TaskMode::MultiLabel;
  }

  std::unordered_set<std::string> ids;
  for (auto& r : records) {
    Instance& inst = r.inst;
    if (!ids.insert(inst.id).second) throw ParseError(source_name, r.line, "duplicate id " + inst.id);
    // Multi-label instances without any emotion are neutral when the
    // inventory defines that class.
    if (inst.emotions.empty() && corpus.mode == TaskMode::MultiLabel && corpus.has_neutral()) {
      inst.emotions.emplace_back(kNeutral);
    }
    std::set<std::size_t> idx;
    for (const auto& e : inst.emotions) {
      const auto i = corpus.label_index(e);
      if (!i) throw ParseError(source_name, r.line, "unknown label '" + e + "'");
      if (!idx.insert(*i).second) throw ParseError(source_name, r.line, "repeated label '" + e + "'");
    }
    if (corpus.mode == TaskMode::SingleLabel && idx.size() != 1) {
      throw ParseError(source_name, r.line,
                       "single-label instance must carry exactly one emotion, got " +
                           std::to_string(idx.size()));
    }
    inst.emotions.clear();
    for (std::size_t i : idx) inst.emotions.push_back(corpus.inventory[i]);
    corpus.instances.push_back(std::move(inst));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open corpus " + path.string());
  return parse_corpus(in, path.string());
}

void write_corpus(std::ostream& out, const Corpus& corpus, bool with_header) {
  if (with_header) {
    json h = {{"header", true}, {"mode", to_string(corpus.mode)}, {"inventory", corpus.inventory}};
    out << h.dump() << '\n';
  }
  for (const auto& inst : corpus.instances) {
    json j = {{"id", inst.id},
              {"text", inst.text},
              {"emotions", inst.emotions},
              {"cpm", std::vector<int>(inst.cpm.begin(), inst.cpm.end())},
              {"domain", to_string(inst.domain)}};
    out << j.dump() << '\n';
  }
}

}  // namespace emocpm::data
