#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "emocpm/autodiff/parameter.hpp"

namespace emocpm::ad {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam. Frozen parameters are skipped and never get moment
// buffers. Every step zeroes all gradients afterwards.
class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  void step(ParameterSet& params);

  std::uint64_t steps() const noexcept { return steps_; }
  const AdamConfig& config() const noexcept { return config_; }
  // Number of parameters that have moment buffers.
  std::size_t tracked() const noexcept { return moments_.size(); }
  bool tracks(const Tensor* t) const { return moments_.contains(t); }

 private:
  struct Moments {
    std::vector<double> first, second;
  };

  AdamConfig config_;
  std::uint64_t steps_ = 0;
  std::unordered_map<const Tensor*, Moments> moments_;
};

}  // namespace emocpm::ad
