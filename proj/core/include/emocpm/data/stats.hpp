#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "emocpm/data/corpus.hpp"

namespace emocpm::data {

struct CooccurrenceRow {
  std::string emotion;
  std::array<std::size_t, kNumComponents> counts{};
  std::size_t total = 0;  // instances carrying this emotion
  // counts / total, exact; 0 when total is 0.
  std::array<double, kNumComponents> fractions{};
};

struct CooccurrenceTable {
  std::vector<CooccurrenceRow> rows;  // inventory order
  // Instances with each component flag, relative to all instances. For
  // multi-label data an instance counts once here but in every emotion row.
  std::array<std::size_t, kNumComponents> component_totals{};
  std::array<double, kNumComponents> component_fractions{};
  std::size_t instances = 0;
};

CooccurrenceTable cooccurrence_stats(const Corpus& corpus);

// Percentages rounded half-up at render time only.
int rounded_percent(double fraction);

void write_stats_tsv(std::ostream& out, const CooccurrenceTable& table);
void write_stats_text(std::ostream& out, const CooccurrenceTable& table);

}  // namespace emocpm::data
