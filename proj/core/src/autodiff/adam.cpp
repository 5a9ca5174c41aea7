#include "emocpm/autodiff/adam.hpp"

#include <cmath>

namespace emocpm::ad {

void Adam::step(ParameterSet& params) {
  ++steps_;
  const double t = static_cast<double>(steps_);
  const double correct1 = 1.0 - std::pow(config_.beta1, t);
  const double correct2 = 1.0 - std::pow(config_.beta2, t);
  for (auto& p : params.items()) {
    if (p.frozen || !p.value->requires_grad()) continue;
    auto& data = p.value->data();
    auto& grad = p.value->grad();
    auto [it, fresh] = moments_.try_emplace(p.value.get());
    if (fresh) {
      it->second.first.assign(data.size(), 0.0);
      it->second.second.assign(data.size(), 0.0);
    }
    auto& m = it->second.first;
    auto& v = it->second.second;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double g = grad[i];
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g;
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g * g;
      const double m_hat = m[i] / correct1;
      const double v_hat = v[i] / correct2;
      data[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }
  params.zero_grad();
}

}  // namespace emocpm::ad
