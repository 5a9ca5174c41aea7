#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace emocpm {

// Sparse row vector: strictly increasing indices, no explicit zeros.
struct SparseVector {
  std::vector<std::pair<std::size_t, double>> entries;

  bool empty() const noexcept { return entries.empty(); }
  std::size_t nnz() const noexcept { return entries.size(); }
  double norm() const;
  // Largest index + 1; 0 for the empty vector.
  std::size_t extent() const noexcept { return entries.empty() ? 0 : entries.back().first + 1; }

  // Appends dense values at [offset, offset + values.size()), skipping zeros.
  // offset must not precede existing entries.
  void append_dense(std::size_t offset, const std::vector<double>& values);

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

// Checks the ordering and no-zero invariants.
bool is_well_formed(const SparseVector& v);

}  // namespace emocpm
