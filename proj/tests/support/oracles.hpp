#pragma once

// Test-only reference implementations. Nothing here calls into the code
// path it is used to check.

#include <cmath>
#include <functional>
#include <vector>

#include "emocpm/autodiff/tensor.hpp"
#include "emocpm/random.hpp"

namespace oracle {

// Central finite differences of a scalar function of one tensor's entries.
inline std::vector<double> numeric_gradient(const std::function<double()>& f,
                                            const emocpm::ad::Var& t, double h = 1e-5) {
  std::vector<double> out(t->size());
  for (std::size_t i = 0; i < t->size(); ++i) {
    const double saved = t->data()[i];
    t->data()[i] = saved + h;
    const double up = f();
    t->data()[i] = saved - h;
    const double down = f();
    t->data()[i] = saved;
    out[i] = (up - down) / (2 * h);
  }
  return out;
}

inline double max_rel_error(const std::vector<double>& a, const std::vector<double>& b,
                            double floor = 1e-6) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::max({std::abs(a[i]), std::abs(b[i]), floor});
    worst = std::max(worst, std::abs(a[i] - b[i]) / d);
  }
  return worst;
}

inline std::vector<double> random_values(emocpm::Rng& rng, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

inline emocpm::ad::Var random_tensor(emocpm::Rng& rng, emocpm::ad::Shape shape,
                                     bool requires_grad = true) {
  const auto n = emocpm::ad::shape_size(shape);
  return emocpm::ad::tensor(std::move(shape), random_values(rng, n), requires_grad);
}

}  // namespace oracle
