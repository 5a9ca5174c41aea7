#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "emocpm/matrix.hpp"
#include "emocpm/sparse.hpp"

namespace emocpm::linear {

enum class MaxEntMode { Multinomial, Binary };

struct MaxEntConfig {
  std::size_t iterations = 200;  // full-batch Adam steps
  double learning_rate = 0.1;
  double l2 = 1e-4;  // penalty (l2 / 2)·||W||², bias unpenalised
};

// Multinomial or binary logistic regression over sparse features.
// Weights start at zero, so training is deterministic given the data.
class MaxEntModel {
 public:
  // labels[i] indexes `classes`. A training set with a single observed class
  // yields a constant predictor flagged as degenerate.
  static MaxEntModel train_multinomial(std::span<const SparseVector> features,
                                       std::span<const std::size_t> labels, std::size_t dimension,
                                       std::vector<std::string> classes,
                                       const MaxEntConfig& config = {});
  static MaxEntModel train_binary(std::span<const SparseVector> features,
                                  std::span<const std::uint8_t> targets, std::size_t dimension,
                                  std::string label, const MaxEntConfig& config = {});

  // Rebuilds a fitted model. Binary models have a single weight column.
  static MaxEntModel from_parts(MaxEntMode mode, std::vector<std::string> classes, Matrix weights,
                                std::vector<double> bias);

  MaxEntMode mode() const noexcept { return mode_; }
  std::size_t dimension() const noexcept { return weights_.rows; }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const Matrix& weights() const noexcept { return weights_; }
  const std::vector<double>& bias() const noexcept { return bias_; }
  bool degenerate() const noexcept { return degenerate_; }

  // Multinomial: softmax over classes. Binary: one probability of the label.
  // Features beyond the model dimension are a ShapeError.
  std::vector<double> scores(const SparseVector& x) const;
  // Multinomial: argmax, ties to the earlier class. Binary: 1 when p > 0.5.
  std::size_t predict(const SparseVector& x) const;

 private:
  MaxEntMode mode_ = MaxEntMode::Multinomial;
  std::vector<std::string> classes_;
  Matrix weights_;  // dimension × columns
  std::vector<double> bias_;
  bool degenerate_ = false;
};

// One binary model per label of a multi-label inventory.
class OneVsRestEnsemble {
 public:
  // targets[i] holds the label indices of instance i. Labels train
  // independently on up to `jobs` threads; results do not depend on jobs.
  static OneVsRestEnsemble train(std::span<const SparseVector> features,
                                 std::span<const std::vector<std::size_t>> targets,
                                 std::size_t dimension, const std::vector<std::string>& inventory,
                                 const MaxEntConfig& config = {}, std::size_t jobs = 1);
  static OneVsRestEnsemble from_models(std::vector<MaxEntModel> models);

  const std::vector<MaxEntModel>& models() const noexcept { return models_; }
  std::size_t size() const noexcept { return models_.size(); }
  std::vector<double> scores(const SparseVector& x) const;
  // Every label with probability > threshold; possibly empty.
  std::vector<std::size_t> predict(const SparseVector& x, double threshold = 0.5) const;

 private:
  std::vector<MaxEntModel> models_;
};

std::size_t argmax(std::span<const double> scores);

}  // namespace emocpm::linear
