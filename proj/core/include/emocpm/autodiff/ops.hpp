#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "emocpm/autodiff/tensor.hpp"
#include "emocpm/random.hpp"
#include "emocpm/sparse.hpp"

namespace emocpm::ad {

// Probabilities entering a log are clamped to [kProbEps, 1 - kProbEps].
inline constexpr double kProbEps = 1e-12;

// Linear algebra. All matrices are row-major; 1-D tensors act as 1×n rows.
Var matmul(const Var& a, const Var& b);
Var affine(const Var& x, const Var& weight, const Var& bias);
Var add(const Var& a, const Var& b);
Var add_n(std::span<const Var> terms);
Var mul(const Var& a, const Var& b);
Var scale(const Var& x, double factor);

// Elementwise nonlinearities.
Var sigmoid(const Var& x);
Var tanh(const Var& x);
Var relu(const Var& x);

// Structural ops.
Var slice_rows(const Var& x, std::size_t begin, std::size_t end);
Var slice_cols(const Var& x, std::size_t begin, std::size_t end);
Var concat_rows(std::span<const Var> parts);
Var concat_cols(std::span<const Var> parts);
// Prepends zero rows until x has at least min_rows rows.
Var pad_rows_front(const Var& x, std::size_t min_rows);
// Sliding windows of k rows flattened: [T×d] -> [(T-k+1) × k·d]. Window t,
// block j holds row t+j.
Var unfold_rows(const Var& x, std::size_t k);
Var detach(const Var& x);

// Per-column maximum over rows: [t×f] -> [1×f]. Gradient goes to the first
// maximal row.
Var max_over_time(const Var& map);
// Pools every map and concatenates the results.
Var max_over_time(std::span<const Var> maps);

// Inverted dropout. Identity when !training or rate == 0.
Var dropout(const Var& x, double rate, bool training, Rng& rng);

// Mixes two equally shaped rows: alpha[row,0]·a + alpha[row,1]·b. alpha is
// either 2×2 or per-channel 2×(2·width) laid out as [row][task][channel].
Var cross_stitch(const Var& a, const Var& b, const Var& alpha, std::size_t row);

// Reductions.
Var sum(const Var& x);
// Sum of x ⊙ weights with constant weights.
Var dot(const Var& x, std::span<const double> weights);
Var sum_squares(const Var& x);

// Mean over elements of -(w·y·ln p + (1-y)·ln(1-p)), p clamped.
Var weighted_bce(const Var& probs, std::span<const double> targets, double pos_weight);
// Plain binary cross-entropy; independent path used as a reference.
Var binary_cross_entropy(const Var& probs, std::span<const double> targets);
// Mean softmax cross-entropy of logits [n×C] against class indices.
Var softmax_cross_entropy(const Var& logits, std::span<const std::size_t> labels);
// Mean logistic loss of logits [n×1] against {0,1} targets.
Var logistic_loss(const Var& logits, std::span<const double> targets);

// rows · weight + bias for constant sparse rows: [n×F]·[F×C] + [C].
Var sparse_affine(std::span<const SparseVector> rows, const Var& weight, const Var& bias);

std::vector<double> softmax(std::span<const double> logits);
double sigmoid(double z);

}  // namespace emocpm::ad
