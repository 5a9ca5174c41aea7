#include "emocpm/linear/maxent.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <thread>

#include "emocpm/autodiff/adam.hpp"
#include "emocpm/autodiff/ops.hpp"
#include "emocpm/autodiff/parameter.hpp"
#include "emocpm/error.hpp"

namespace emocpm::linear {

std::size_t argmax(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[best]) best = i;
  return best;
}

namespace {

void check_inputs(std::size_t n_features, std::size_t n_targets, std::size_t dimension,
                  std::span<const SparseVector> features) {
  if (n_features == 0) throw DataError("maxent: empty training set");
  if (n_features != n_targets) {
    throw DataError("maxent: " + std::to_string(n_features) + " feature rows but " +
                    std::to_string(n_targets) + " targets");
  }
  for (const auto& x : features)
    if (x.extent() > dimension)
      throw ShapeError("maxent: feature index " + std::to_string(x.extent() - 1) +
                       " outside dimension " + std::to_string(dimension));
}

// Full-batch Adam on mean loss + (l2/2)·||W||².
template <typename Loss>
void fit(std::span<const SparseVector> features, ad::ParameterSet& params, const MaxEntConfig& config,
         Loss&& loss_of_logits) {
  ad::Adam adam({config.learning_rate});
  const auto W = params.at("W"), b = params.at("b");
  for (std::size_t it = 0; it < config.iterations; ++it) {
    auto logits = ad::sparse_affine(features, W, b);
    auto loss = loss_of_logits(logits);
    if (config.l2 > 0) loss = ad::add(loss, ad::scale(ad::sum_squares(W), 0.5 * config.l2));
    ad::backward(loss);
    adam.step(params);
  }
}

}  // namespace

MaxEntModel MaxEntModel::train_multinomial(std::span<const SparseVector> features,
                                           std::span<const std::size_t> labels,
                                           std::size_t dimension, std::vector<std::string> classes,
                                           const MaxEntConfig& config) {
  if (classes.empty()) throw ConfigError("maxent: empty class inventory");
  check_inputs(features.size(), labels.size(), dimension, features);
  for (std::size_t y : labels)
    if (y >= classes.size()) throw DataError("maxent: label index out of range");

  MaxEntModel m;
  m.mode_ = MaxEntMode::Multinomial;
  m.classes_ = std::move(classes);
  const std::size_t C = m.classes_.size();
  m.weights_ = Matrix(dimension, C);
  m.bias_.assign(C, 0.0);

  if (std::all_of(labels.begin(), labels.end(), [&](std::size_t y) { return y == labels[0]; })) {
    // Only one class observed: predict it everywhere.
    m.degenerate_ = true;
    for (std::size_t c = 0; c < C; ++c) m.bias_[c] = c == labels[0] ? 0.0 : -1e3;
    return m;
  }

  ad::ParameterSet params;
  params.add("W", {dimension, C});
  params.add("b", {C});
  fit(features, params, config,
      [&](const ad::Var& logits) { return ad::softmax_cross_entropy(logits, labels); });
  m.weights_.values = params.at("W")->data();
  m.bias_ = params.at("b")->data();
  return m;
}

MaxEntModel MaxEntModel::train_binary(std::span<const SparseVector> features,
                                      std::span<const std::uint8_t> targets, std::size_t dimension,
                                      std::string label, const MaxEntConfig& config) {
  check_inputs(features.size(), targets.size(), dimension, features);
  MaxEntModel m;
  m.mode_ = MaxEntMode::Binary;
  m.classes_ = {std::move(label)};
  m.weights_ = Matrix(dimension, 1);
  m.bias_.assign(1, 0.0);

  std::vector<double> y(targets.begin(), targets.end());
  for (double v : y)
    if (v != 0.0 && v != 1.0) throw DataError("maxent: binary targets must be 0 or 1");
  if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) {
    m.degenerate_ = true;
    m.bias_[0] = y[0] == 1.0 ? 1e3 : -1e3;
    return m;
  }

  ad::ParameterSet params;
  params.add("W", {dimension, 1});
  params.add("b", {1});
  fit(features, params, config, [&](const ad::Var& logits) { return ad::logistic_loss(logits, y); });
  m.weights_.values = params.at("W")->data();
  m.bias_ = params.at("b")->data();
  return m;
}

MaxEntModel MaxEntModel::from_parts(MaxEntMode mode, std::vector<std::string> classes,
                                    Matrix weights, std::vector<double> bias) {
  const std::size_t cols = mode == MaxEntMode::Binary ? 1 : classes.size();
  if (classes.empty()) throw DataError("maxent: empty class inventory");
  if (mode == MaxEntMode::Binary && classes.size() != 1)
    throw DataError("maxent: binary model needs exactly one label");
  if (weights.cols != cols || bias.size() != cols || weights.values.size() != weights.rows * cols)
    throw DataError("maxent: parameter shapes do not match the class inventory");
  MaxEntModel m;
  m.mode_ = mode;
  m.classes_ = std::move(classes);
  m.weights_ = std::move(weights);
  m.bias_ = std::move(bias);
  return m;
}

std::vector<double> MaxEntModel::scores(const SparseVector& x) const {
  if (x.extent() > dimension()) {
    throw ShapeError("maxent: input has feature " + std::to_string(x.extent() - 1) +
                     " but model dimension is " + std::to_string(dimension()));
  }
  const std::size_t C = weights_.cols;
  std::vector<double> z = bias_;
  for (const auto& [idx, v] : x.entries)
    for (std::size_t c = 0; c < C; ++c) z[c] += v * weights_.values[idx * C + c];
  if (mode_ == MaxEntMode::Binary) return {ad::sigmoid(z[0])};
  return ad::softmax(z);
}

std::size_t MaxEntModel::predict(const SparseVector& x) const {
  const auto s = scores(x);
  if (mode_ == MaxEntMode::Binary) return s[0] > 0.5 ? 1 : 0;
  return argmax(s);
}

OneVsRestEnsemble OneVsRestEnsemble::train(std::span<const SparseVector> features,
                                           std::span<const std::vector<std::size_t>> targets,
                                           std::size_t dimension,
                                           const std::vector<std::string>& inventory,
                                           const MaxEntConfig& config, std::size_t jobs) {
  if (inventory.empty()) throw ConfigError("one-vs-rest: empty label inventory");
  if (features.size() != targets.size()) throw DataError("one-vs-rest: feature/target count mismatch");
  const std::size_t L = inventory.size();
  std::vector<std::vector<std::uint8_t>> columns(L, std::vector<std::uint8_t>(targets.size(), 0));
  for (std::size_t i = 0; i < targets.size(); ++i)
    for (std::size_t l : targets[i]) {
      if (l >= L) throw DataError("one-vs-rest: label index out of range");
      columns[l][i] = 1;
    }

  std::vector<std::optional<MaxEntModel>> slots(L);
  std::vector<std::exception_ptr> errors(L);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t l; (l = next++) < L;) {
      try {
        slots[l] = MaxEntModel::train_binary(features, columns[l], dimension, inventory[l], config);
      } catch (...) {
        errors[l] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(jobs, 1, L);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  OneVsRestEnsemble ens;
  for (auto& s : slots) ens.models_.push_back(std::move(*s));
  return ens;
}

OneVsRestEnsemble OneVsRestEnsemble::from_models(std::vector<MaxEntModel> models) {
  if (models.empty()) throw DataError("one-vs-rest: no models");
  for (const auto& m : models)
    if (m.mode() != MaxEntMode::Binary) throw DataError("one-vs-rest: members must be binary");
  OneVsRestEnsemble ens;
  ens.models_ = std::move(models);
  return ens;
}

std::vector<double> OneVsRestEnsemble::scores(const SparseVector& x) const {
  std::vector<double> out;
  out.reserve(models_.size());
  for (const auto& m : models_) out.push_back(m.scores(x)[0]);
  return out;
}

std::vector<std::size_t> OneVsRestEnsemble::predict(const SparseVector& x, double threshold) const {
  std::vector<std::size_t> out;
  const auto s = scores(x);
  for (std::size_t l = 0; l < s.size(); ++l)
    if (s[l] > threshold) out.push_back(l);
  return out;
}

}  // namespace emocpm::linear
