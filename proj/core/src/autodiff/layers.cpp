#include "emocpm/autodiff/layers.hpp"

#include "emocpm/error.hpp"

namespace emocpm::ad {

Linear::Linear(ParameterSet& params, const std::string& name, std::size_t in, std::size_t out,
               Rng& rng)
    : weight_(params.add_glorot(name + ".W", {in, out}, in, out, rng)),
      bias_(params.add(name + ".b", {out})) {}

LstmCell::LstmCell(ParameterSet& params, const std::string& name, std::size_t input_dim,
                   std::size_t units, Rng& rng)
    : wx_(params.add_glorot(name + ".Wx", {input_dim, 4 * units}, input_dim, 4 * units, rng)),
      wh_(params.add_glorot(name + ".Wh", {units, 4 * units}, units, 4 * units, rng)),
      b_(params.add(name + ".b", {4 * units})),
      units_(units) {}

Var LstmCell::run(const Var& x, bool reverse) const {
  const std::size_t T = x->rows(), u = units_;
  if (T == 0) throw ShapeError("LSTM input sequence is empty");
  const Var projected = affine(x, wx_, b_);  // all timesteps at once
  Var h = zeros({1, u});
  Var c = zeros({1, u});
  std::vector<Var> states(T);
  for (std::size_t step = 0; step < T; ++step) {
    const std::size_t t = reverse ? T - 1 - step : step;
    const Var gates = add(slice_rows(projected, t, t + 1), matmul(h, wh_));
    const Var i = sigmoid(slice_cols(gates, 0, u));
    const Var f = sigmoid(slice_cols(gates, u, 2 * u));
    const Var o = sigmoid(slice_cols(gates, 2 * u, 3 * u));
    const Var g = tanh(slice_cols(gates, 3 * u, 4 * u));
    c = add(mul(f, c), mul(i, g));
    h = mul(o, tanh(c));
    states[t] = h;
  }
  return concat_rows(states);
}

BiLstm::BiLstm(ParameterSet& params, const std::string& name, std::size_t input_dim,
               std::size_t units, Rng& rng)
    : forward_(params, name + ".fwd", input_dim, units, rng),
      backward_(params, name + ".bwd", input_dim, units, rng) {}

Var BiLstm::operator()(const Var& x) const {
  const Var fwd = forward_.run(x, false);
  const Var bwd = backward_.run(x, true);
  const Var parts[] = {fwd, bwd};
  return concat_cols(parts);
}

MultiKernelConv::MultiKernelConv(ParameterSet& params, const std::string& name,
                                 std::size_t input_dim, std::vector<std::size_t> kernel_sizes,
                                 std::size_t filters, Rng& rng)
    : kernel_sizes_(std::move(kernel_sizes)), filters_(filters) {
  if (kernel_sizes_.empty()) throw ConfigError("at least one convolution kernel size is required");
  for (std::size_t k : kernel_sizes_) {
    if (k == 0) throw ConfigError("convolution kernel size must be >= 1");
    const std::string base = name + ".k" + std::to_string(k);
    weights_.push_back(params.add_glorot(base + ".W", {k * input_dim, filters}, k * input_dim,
                                         filters, rng));
    biases_.push_back(params.add(base + ".b", {filters}));
  }
}

std::vector<Var> MultiKernelConv::operator()(const Var& x, bool apply_relu) const {
  std::vector<Var> maps;
  maps.reserve(kernel_sizes_.size());
  for (std::size_t i = 0; i < kernel_sizes_.size(); ++i) {
    const std::size_t k = kernel_sizes_[i];
    const Var windows = unfold_rows(pad_rows_front(x, k), k);
    const Var response = affine(windows, weights_[i], biases_[i]);
    maps.push_back(apply_relu ? relu(response) : response);
  }
  return maps;
}

}  // namespace emocpm::ad
