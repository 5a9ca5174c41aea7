#include "emocpm/sparse.hpp"

#include <cmath>
#include <stdexcept>

namespace emocpm {

double SparseVector::norm() const {
  double s = 0.0;
  for (const auto& [_, v] : entries) s += v * v;
  return std::sqrt(s);
}

void SparseVector::append_dense(std::size_t offset, const std::vector<double>& values) {
  if (!entries.empty() && offset < extent()) {
    throw std::logic_error("SparseVector::append_dense: offset overlaps existing entries");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) entries.emplace_back(offset + i, values[i]);
  }
}

bool is_well_formed(const SparseVector& v) {
  for (std::size_t i = 0; i < v.entries.size(); ++i) {
    if (v.entries[i].second == 0.0) return false;
    if (i > 0 && v.entries[i - 1].first >= v.entries[i].first) return false;
  }
  return true;
}

}  // namespace emocpm
