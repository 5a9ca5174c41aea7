#include "emocpm/data/stats.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace emocpm::data {

CooccurrenceTable cooccurrence_stats(const Corpus& corpus) {
  CooccurrenceTable table;
  table.instances = corpus.size();
  table.rows.resize(corpus.inventory.size());
  for (std::size_t e = 0; e < corpus.inventory.size(); ++e) table.rows[e].emotion = corpus.inventory[e];
  for (const auto& inst : corpus.instances) {
    for (std::size_t e : corpus.emotion_labels(inst)) {
      auto& row = table.rows[e];
      ++row.total;
      for (std::size_t c = 0; c < kNumComponents; ++c) row.counts[c] += inst.cpm[c];
    }
    for (std::size_t c = 0; c < kNumComponents; ++c) table.component_totals[c] += inst.cpm[c];
  }
  for (auto& row : table.rows)
    for (std::size_t c = 0; c < kNumComponents; ++c)
      row.fractions[c] = row.total == 0 ? 0.0
                                        : static_cast<double>(row.counts[c]) / static_cast<double>(row.total);
  for (std::size_t c = 0; c < kNumComponents; ++c)
    table.component_fractions[c] =
        table.instances == 0 ? 0.0
                             : static_cast<double>(table.component_totals[c]) /
                                   static_cast<double>(table.instances);
  return table;
}

int rounded_percent(double fraction) {
  // Half-up on the exact ratio; the epsilon absorbs representation error
  // in values such as 0.125 * 100.
  return static_cast<int>(std::floor(fraction * 100.0 + 0.5 + 1e-9));
}

void write_stats_tsv(std::ostream& out, const CooccurrenceTable& table) {
  out << "emotion";
  for (auto name : kComponentNames) out << '\t' << name << "\t" << name << "_pct";
  out << "\ttotal\n";
  for (const auto& row : table.rows) {
    out << row.emotion;
    for (std::size_t c = 0; c < kNumComponents; ++c)
      out << '\t' << row.counts[c] << '\t' << rounded_percent(row.fractions[c]);
    out << '\t' << row.total << '\n';
  }
  out << "total";
  for (std::size_t c = 0; c < kNumComponents; ++c)
    out << '\t' << table.component_totals[c] << '\t' << rounded_percent(table.component_fractions[c]);
  out << '\t' << table.instances << '\n';
}

void write_stats_text(std::ostream& out, const CooccurrenceTable& table) {
  static constexpr std::array<std::string_view, kNumComponents> kHeads = {
      "Cognitive", "Phys.", "Motiv. Action", "Motor Exp.", "Subject."};
  auto cell = [](std::size_t count, double frac) {
    std::ostringstream os;
    os << count << " (" << rounded_percent(frac) << "%)";
    return os.str();
  };
  if (table.instances == 0) {
    out << "0 instances\n";
    return;
  }
  std::size_t label_w = 7;
  for (const auto& row : table.rows) label_w = std::max(label_w, row.emotion.size());
  constexpr int kCell = 14;
  out << std::left << std::setw(static_cast<int>(label_w)) << "Emotion";
  for (auto h : kHeads) out << "  " << std::right << std::setw(kCell) << h;
  out << "  " << std::setw(6) << "Total" << '\n';
  for (const auto& row : table.rows) {
    out << std::left << std::setw(static_cast<int>(label_w)) << row.emotion;
    for (std::size_t c = 0; c < kNumComponents; ++c)
      out << "  " << std::right << std::setw(kCell) << cell(row.counts[c], row.fractions[c]);
    out << "  " << std::setw(6) << row.total << '\n';
  }
  out << std::left << std::setw(static_cast<int>(label_w)) << "Total";
  for (std::size_t c = 0; c < kNumComponents; ++c)
    out << "  " << std::right << std::setw(kCell)
        << cell(table.component_totals[c], table.component_fractions[c]);
  out << "  " << std::setw(6) << table.instances << '\n';
  out << table.instances << " instances\n";
}

}  // namespace emocpm::data
