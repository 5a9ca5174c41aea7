#include "emocpm/data/agreement.hpp"

#include <fstream>
#include <map>

#include <json.hpp>

#include "emocpm/error.hpp"

namespace emocpm::data {

KappaResult cohen_kappa(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  if (a.empty()) throw DataError("cohen_kappa: no paired annotations");
  if (a.size() != b.size()) {
    throw DataError("cohen_kappa: annotation vectors differ in length (" +
                    std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
  const double n = static_cast<double>(a.size());
  std::size_t agree = 0, a1 = 0, b1 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    agree += (a[i] != 0) == (b[i] != 0);
    a1 += a[i] != 0;
    b1 += b[i] != 0;
  }
  KappaResult r;
  r.observed = static_cast<double>(agree) / n;
  const double pa = static_cast<double>(a1) / n, pb = static_cast<double>(b1) / n;
  r.expected = pa * pb + (1.0 - pa) * (1.0 - pb);
  if ((a1 == 0 || a1 == a.size()) && a1 == b1) {
    // p_e is exactly 1 and agreement is perfect.
    r.defined = false;
    r.kappa = 1.0;
    r.expected = 1.0;
    return r;
  }
  r.kappa = (r.observed - r.expected) / (1.0 - r.expected);
  return r;
}

namespace {

std::map<std::string, CpmFlags> read_annotations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open annotation file " + path.string());
  std::map<std::string, CpmFlags> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(path.string(), lineno, std::string("invalid JSON: ") + e.what());
    }
    if (j.is_object() && j.value("header", false)) continue;
    if (!j.is_object() || !j.contains("id") || !j.contains("cpm")) {
      throw ParseError(path.string(), lineno, "record needs id and cpm");
    }
    const std::string id = j.at("id").is_string() ? j.at("id").get<std::string>()
                                                  : j.at("id").dump();
    const auto& cpm = j.at("cpm");
    if (!cpm.is_array() || cpm.size() != kNumComponents) {
      throw ParseError(path.string(), lineno, "cpm must be an array of 5 flags");
    }
    CpmFlags flags{};
    for (std::size_t c = 0; c < kNumComponents; ++c) {
      if (!cpm[c].is_number_integer() || (cpm[c].get<int>() != 0 && cpm[c].get<int>() != 1))
        throw ParseError(path.string(), lineno, "cpm flags must be 0 or 1");
      flags[c] = static_cast<std::uint8_t>(cpm[c].get<int>());
    }
    if (!out.emplace(id, flags).second) throw ParseError(path.string(), lineno, "duplicate id " + id);
  }
  return out;
}

}  // namespace

AgreementRecord load_agreement(const std::filesystem::path& first,
                               const std::filesystem::path& second) {
  const auto a = read_annotations(first);
  const auto b = read_annotations(second);
  AgreementRecord rec;
  for (const auto& [id, flags] : a) {
    const auto it = b.find(id);
    if (it == b.end()) throw LookupError("id " + id + " annotated in " + first.string() + " only");
    rec.ids.push_back(id);
    for (std::size_t c = 0; c < kNumComponents; ++c) {
      rec.first[c].push_back(flags[c]);
      rec.second[c].push_back(it->second[c]);
    }
  }
  for (const auto& [id, _] : b)
    if (!a.contains(id)) throw LookupError("id " + id + " annotated in " + second.string() + " only");
  return rec;
}

std::array<KappaResult, kNumComponents> component_kappas(const AgreementRecord& record) {
  std::array<KappaResult, kNumComponents> out;
  for (std::size_t c = 0; c < kNumComponents; ++c) out[c] = cohen_kappa(record.first[c], record.second[c]);
  return out;
}

}  // namespace emocpm::data
