#pragma once

#include <string>
#include <vector>

#include "emocpm/autodiff/ops.hpp"
#include "emocpm/autodiff/parameter.hpp"

namespace emocpm::ad {

// Fully connected layer, Glorot-uniform weights, zero bias.
class Linear {
 public:
  Linear() = default;
  Linear(ParameterSet& params, const std::string& name, std::size_t in, std::size_t out, Rng& rng);

  Var operator()(const Var& x) const { return affine(x, weight_, bias_); }
  const Var& weight() const noexcept { return weight_; }
  const Var& bias() const noexcept { return bias_; }
  std::size_t in_features() const { return weight_->rows(); }
  std::size_t out_features() const { return weight_->cols(); }

 private:
  Var weight_, bias_;
};

// Standard LSTM cell. Gate columns are laid out as [input, forget, output,
// candidate], each `units` wide.
class LstmCell {
 public:
  LstmCell() = default;
  LstmCell(ParameterSet& params, const std::string& name, std::size_t input_dim,
           std::size_t units, Rng& rng);

  // Runs the cell over all rows of x from zero state. Returns T×units hidden
  // states in time order; reverse=true consumes rows from last to first but
  // still returns them aligned with the input rows.
  Var run(const Var& x, bool reverse) const;

  std::size_t units() const noexcept { return units_; }
  const Var& input_weight() const noexcept { return wx_; }
  const Var& recurrent_weight() const noexcept { return wh_; }
  const Var& bias() const noexcept { return b_; }

 private:
  Var wx_, wh_, b_;
  std::size_t units_ = 0;
};

class BiLstm {
 public:
  BiLstm() = default;
  BiLstm(ParameterSet& params, const std::string& name, std::size_t input_dim,
         std::size_t units, Rng& rng);

  // [T×d] -> [T×2·units]: forward states then backward states per row.
  Var operator()(const Var& x) const;

  std::size_t units() const noexcept { return forward_.units(); }
  std::size_t output_dim() const noexcept { return 2 * units(); }
  const LstmCell& forward_cell() const noexcept { return forward_; }
  const LstmCell& backward_cell() const noexcept { return backward_; }

 private:
  LstmCell forward_, backward_;
};

// Parallel valid 1-D convolutions over time, one bank per kernel size.
// Inputs shorter than a kernel are left-padded with zero rows for that kernel.
class MultiKernelConv {
 public:
  MultiKernelConv() = default;
  MultiKernelConv(ParameterSet& params, const std::string& name, std::size_t input_dim,
                  std::vector<std::size_t> kernel_sizes, std::size_t filters, Rng& rng);

  // One [(T'-k+1)×filters] map per kernel size.
  std::vector<Var> operator()(const Var& x, bool apply_relu = true) const;

  const std::vector<std::size_t>& kernel_sizes() const noexcept { return kernel_sizes_; }
  std::size_t filters() const noexcept { return filters_; }
  std::size_t pooled_dim() const noexcept { return filters_ * kernel_sizes_.size(); }
  const Var& weight(std::size_t i) const { return weights_.at(i); }
  const Var& bias(std::size_t i) const { return biases_.at(i); }

 private:
  std::vector<std::size_t> kernel_sizes_;
  std::size_t filters_ = 0;
  std::vector<Var> weights_, biases_;
};

}  // namespace emocpm::ad
