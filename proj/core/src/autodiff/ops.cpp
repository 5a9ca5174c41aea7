#include "emocpm/autodiff/ops.hpp"

#include <algorithm>
#include <cmath>

#include "emocpm/error.hpp"

namespace emocpm::ad {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ShapeError(message);
}

std::string pair_shapes(const Var& a, const Var& b) {
  return shape_string(a->shape()) + " and " + shape_string(b->shape());
}

double clamp_prob(double p) { return std::clamp(p, kProbEps, 1.0 - kProbEps); }

template <typename Fn, typename Deriv>
Var unary(const Var& x, Fn fn, Deriv deriv_from_output) {
  std::vector<double> out(x->size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(x->data()[i]);
  return make_node(x->shape(), std::move(out), {x}, [x, deriv_from_output](Tensor& self) {
    auto& g = x->grad();
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] += self.grad()[i] * deriv_from_output(x->data()[i], self.data()[i]);
    }
  });
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.begin(), logits.end());
  if (out.empty()) return out;
  const double mx = *std::max_element(out.begin(), out.end());
  double z = 0.0;
  for (double& v : out) z += (v = std::exp(v - mx));
  for (double& v : out) v /= z;
  return out;
}

Var matmul(const Var& a, const Var& b) {
  const std::size_t n = a->rows(), k = a->cols(), m = b->cols();
  require(b->rows() == k, "matmul: inner dimensions differ for " + pair_shapes(a, b));
  std::vector<double> out(n * m, 0.0);
  const auto& A = a->data();
  const auto& B = b->data();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double av = A[i * k + p];
      if (av == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) out[i * m + j] += av * B[p * m + j];
    }
  }
  return make_node({n, m}, std::move(out), {a, b}, [a, b, n, k, m](Tensor& self) {
    const auto& G = self.grad();
    if (a->requires_grad()) {
      auto& ga = a->grad();
      const auto& B = b->data();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          double s = 0.0;
          for (std::size_t j = 0; j < m; ++j) s += G[i * m + j] * B[p * m + j];
          ga[i * k + p] += s;
        }
    }
    if (b->requires_grad()) {
      auto& gb = b->grad();
      const auto& A = a->data();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          const double av = A[i * k + p];
          if (av == 0.0) continue;
          for (std::size_t j = 0; j < m; ++j) gb[p * m + j] += av * G[i * m + j];
        }
    }
  });
}

Var affine(const Var& x, const Var& weight, const Var& bias) {
  require(weight->shape().size() == 2 && x->cols() == weight->rows(),
          "affine: input " + shape_string(x->shape()) + " incompatible with weight " +
              shape_string(weight->shape()));
  require(bias->size() == weight->cols(),
          "affine: bias " + shape_string(bias->shape()) + " incompatible with weight " +
              shape_string(weight->shape()));
  const Var xw = matmul(x, weight);
  const std::size_t n = xw->rows(), m = xw->cols();
  std::vector<double> out = xw->data();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) out[i * m + j] += bias->data()[j];
  return make_node({n, m}, std::move(out), {xw, bias}, [xw, bias, n, m](Tensor& self) {
    const auto& G = self.grad();
    if (xw->requires_grad())
      for (std::size_t i = 0; i < G.size(); ++i) xw->grad()[i] += G[i];
    if (bias->requires_grad())
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) bias->grad()[j] += G[i * m + j];
  });
}

Var add(const Var& a, const Var& b) {
  require(a->size() == b->size(), "add: shape mismatch " + pair_shapes(a, b));
  std::vector<double> out(a->size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a->data()[i] + b->data()[i];
  return make_node(a->shape(), std::move(out), {a, b}, [a, b](Tensor& self) {
    for (const Var& p : {a, b}) {
      if (!p->requires_grad()) continue;
      for (std::size_t i = 0; i < self.size(); ++i) p->grad()[i] += self.grad()[i];
    }
  });
}

Var add_n(std::span<const Var> terms) {
  require(!terms.empty(), "add_n: no terms");
  std::vector<double> out(terms[0]->size(), 0.0);
  for (const Var& t : terms) {
    require(t->size() == out.size(), "add_n: shape mismatch " + pair_shapes(terms[0], t));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += t->data()[i];
  }
  std::vector<Var> parents(terms.begin(), terms.end());
  return make_node(terms[0]->shape(), std::move(out), parents, [parents](Tensor& self) {
    for (const Var& p : parents) {
      if (!p->requires_grad()) continue;
      for (std::size_t i = 0; i < self.size(); ++i) p->grad()[i] += self.grad()[i];
    }
  });
}

Var mul(const Var& a, const Var& b) {
  require(a->size() == b->size(), "mul: shape mismatch " + pair_shapes(a, b));
  std::vector<double> out(a->size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a->data()[i] * b->data()[i];
  return make_node(a->shape(), std::move(out), {a, b}, [a, b](Tensor& self) {
    const auto& G = self.grad();
    if (a->requires_grad())
      for (std::size_t i = 0; i < G.size(); ++i) a->grad()[i] += G[i] * b->data()[i];
    if (b->requires_grad())
      for (std::size_t i = 0; i < G.size(); ++i) b->grad()[i] += G[i] * a->data()[i];
  });
}

Var scale(const Var& x, double factor) {
  return unary(
      x, [factor](double v) { return factor * v; },
      [factor](double, double) { return factor; });
}

Var sigmoid(const Var& x) {
  return unary(
      x, [](double v) { return sigmoid(v); }, [](double, double y) { return y * (1.0 - y); });
}

Var tanh(const Var& x) {
  return unary(
      x, [](double v) { return std::tanh(v); }, [](double, double y) { return 1.0 - y * y; });
}

Var relu(const Var& x) {
  return unary(
      x, [](double v) { return v > 0.0 ? v : 0.0; },
      [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Var slice_rows(const Var& x, std::size_t begin, std::size_t end) {
  const std::size_t c = x->cols();
  require(begin <= end && end <= x->rows(),
          "slice_rows: range [" + std::to_string(begin) + "," + std::to_string(end) +
              ") outside " + shape_string(x->shape()));
  std::vector<double> out(x->data().begin() + begin * c, x->data().begin() + end * c);
  return make_node({end - begin, c}, std::move(out), {x}, [x, begin, c](Tensor& self) {
    for (std::size_t i = 0; i < self.size(); ++i) x->grad()[begin * c + i] += self.grad()[i];
  });
}

Var slice_cols(const Var& x, std::size_t begin, std::size_t end) {
  const std::size_t r = x->rows(), c = x->cols(), w = end - begin;
  require(begin <= end && end <= c,
          "slice_cols: range [" + std::to_string(begin) + "," + std::to_string(end) +
              ") outside " + shape_string(x->shape()));
  std::vector<double> out(r * w);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < w; ++j) out[i * w + j] = x->data()[i * c + begin + j];
  return make_node({r, w}, std::move(out), {x}, [x, begin, r, c, w](Tensor& self) {
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < w; ++j) x->grad()[i * c + begin + j] += self.grad()[i * w + j];
  });
}

Var concat_rows(std::span<const Var> parts) {
  require(!parts.empty(), "concat_rows: no parts");
  const std::size_t c = parts[0]->cols();
  std::size_t r = 0;
  std::vector<double> out;
  for (const Var& p : parts) {
    require(p->cols() == c, "concat_rows: column mismatch " + pair_shapes(parts[0], p));
    r += p->rows();
    out.insert(out.end(), p->data().begin(), p->data().end());
  }
  std::vector<Var> parents(parts.begin(), parts.end());
  return make_node({r, c}, std::move(out), parents, [parents](Tensor& self) {
    std::size_t off = 0;
    for (const Var& p : parents) {
      if (p->requires_grad())
        for (std::size_t i = 0; i < p->size(); ++i) p->grad()[i] += self.grad()[off + i];
      off += p->size();
    }
  });
}

Var concat_cols(std::span<const Var> parts) {
  require(!parts.empty(), "concat_cols: no parts");
  const std::size_t r = parts[0]->rows();
  std::size_t c = 0;
  for (const Var& p : parts) {
    require(p->rows() == r, "concat_cols: row mismatch " + pair_shapes(parts[0], p));
    c += p->cols();
  }
  std::vector<double> out(r * c);
  std::size_t off = 0;
  for (const Var& p : parts) {
    const std::size_t pc = p->cols();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < pc; ++j) out[i * c + off + j] = p->data()[i * pc + j];
    off += pc;
  }
  std::vector<Var> parents(parts.begin(), parts.end());
  return make_node({r, c}, std::move(out), parents, [parents, r, c](Tensor& self) {
    std::size_t off = 0;
    for (const Var& p : parents) {
      const std::size_t pc = p->cols();
      if (p->requires_grad())
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < pc; ++j) p->grad()[i * pc + j] += self.grad()[i * c + off + j];
      off += pc;
    }
  });
}

Var pad_rows_front(const Var& x, std::size_t min_rows) {
  const std::size_t r = x->rows(), c = x->cols();
  if (r >= min_rows) return x;
  const std::size_t pad = min_rows - r;
  std::vector<double> out(pad * c, 0.0);
  out.insert(out.end(), x->data().begin(), x->data().end());
  return make_node({min_rows, c}, std::move(out), {x}, [x, pad, c](Tensor& self) {
    for (std::size_t i = 0; i < x->size(); ++i) x->grad()[i] += self.grad()[pad * c + i];
  });
}

Var unfold_rows(const Var& x, std::size_t k) {
  const std::size_t T = x->rows(), d = x->cols();
  require(k >= 1 && k <= T, "unfold_rows: window " + std::to_string(k) + " does not fit " +
                                shape_string(x->shape()));
  const std::size_t windows = T - k + 1, width = k * d;
  std::vector<double> out(windows * width);
  for (std::size_t t = 0; t < windows; ++t)
    std::copy_n(x->data().begin() + t * d, width, out.begin() + t * width);
  return make_node({windows, width}, std::move(out), {x}, [x, windows, width, d](Tensor& self) {
    for (std::size_t t = 0; t < windows; ++t)
      for (std::size_t j = 0; j < width; ++j) x->grad()[t * d + j] += self.grad()[t * width + j];
  });
}

Var detach(const Var& x) { return tensor(x->shape(), x->data(), false); }

Var max_over_time(const Var& map) {
  const std::size_t t = map->rows(), f = map->cols();
  require(t >= 1 && f >= 1, "max_over_time: empty map " + shape_string(map->shape()));
  std::vector<double> out(f);
  std::vector<std::size_t> arg(f, 0);
  for (std::size_t j = 0; j < f; ++j) {
    out[j] = map->data()[j];
    for (std::size_t i = 1; i < t; ++i) {
      if (map->data()[i * f + j] > out[j]) {
        out[j] = map->data()[i * f + j];
        arg[j] = i;
      }
    }
  }
  return make_node({1, f}, std::move(out), {map}, [map, arg, f](Tensor& self) {
    for (std::size_t j = 0; j < f; ++j) map->grad()[arg[j] * f + j] += self.grad()[j];
  });
}

Var max_over_time(std::span<const Var> maps) {
  std::vector<Var> pooled;
  pooled.reserve(maps.size());
  for (const Var& m : maps) pooled.push_back(max_over_time(m));
  return concat_cols(pooled);
}

Var dropout(const Var& x, double rate, bool training, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ConfigError("dropout rate must be in [0,1), got " + std::to_string(rate));
  }
  if (!training || rate == 0.0) return x;
  const double keep_scale = 1.0 / (1.0 - rate);
  std::vector<double> mask(x->size());
  for (double& m : mask) m = rng.uniform() < rate ? 0.0 : keep_scale;
  std::vector<double> out(x->size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x->data()[i] * mask[i];
  return make_node(x->shape(), std::move(out), {x}, [x, mask](Tensor& self) {
    for (std::size_t i = 0; i < mask.size(); ++i) x->grad()[i] += self.grad()[i] * mask[i];
  });
}

Var cross_stitch(const Var& a, const Var& b, const Var& alpha, std::size_t row) {
  require(a->size() == b->size(), "cross_stitch: shape mismatch " + pair_shapes(a, b));
  require(row < 2, "cross_stitch: row must be 0 or 1");
  const std::size_t w = a->size();
  const bool per_channel = alpha->size() == 4 * w && w != 1;
  require(alpha->size() == 4 || per_channel,
          "cross_stitch: alpha " + shape_string(alpha->shape()) + " incompatible with width " +
              std::to_string(w));
  // Index of alpha[row][task][channel].
  auto at = [per_channel, row, w](std::size_t task, std::size_t ch) {
    return per_channel ? (row * 2 + task) * w + ch : row * 2 + task;
  };
  std::vector<double> out(w);
  for (std::size_t i = 0; i < w; ++i)
    out[i] = alpha->data()[at(0, i)] * a->data()[i] + alpha->data()[at(1, i)] * b->data()[i];
  return make_node(a->shape(), std::move(out), {a, b, alpha}, [a, b, alpha, at, w](Tensor& self) {
    const auto& G = self.grad();
    for (std::size_t i = 0; i < w; ++i) {
      if (a->requires_grad()) a->grad()[i] += G[i] * alpha->data()[at(0, i)];
      if (b->requires_grad()) b->grad()[i] += G[i] * alpha->data()[at(1, i)];
      if (alpha->requires_grad()) {
        alpha->grad()[at(0, i)] += G[i] * a->data()[i];
        alpha->grad()[at(1, i)] += G[i] * b->data()[i];
      }
    }
  });
}

Var sum(const Var& x) {
  double s = 0.0;
  for (double v : x->data()) s += v;
  return make_node({1}, {s}, {x}, [x](Tensor& self) {
    for (double& g : x->grad()) g += self.grad()[0];
  });
}

Var dot(const Var& x, std::span<const double> weights) {
  require(weights.size() == x->size(), "dot: " + std::to_string(weights.size()) +
                                           " weights for " + shape_string(x->shape()));
  std::vector<double> w(weights.begin(), weights.end());
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += x->data()[i] * w[i];
  return make_node({1}, {s}, {x}, [x, w](Tensor& self) {
    for (std::size_t i = 0; i < w.size(); ++i) x->grad()[i] += self.grad()[0] * w[i];
  });
}

Var sum_squares(const Var& x) {
  double s = 0.0;
  for (double v : x->data()) s += v * v;
  return make_node({1}, {s}, {x}, [x](Tensor& self) {
    for (std::size_t i = 0; i < x->size(); ++i) x->grad()[i] += 2.0 * x->data()[i] * self.grad()[0];
  });
}

Var weighted_bce(const Var& probs, std::span<const double> targets, double pos_weight) {
  if (!(pos_weight > 0.0)) {
    throw ConfigError("positive-class loss weight must be > 0, got " + std::to_string(pos_weight));
  }
  require(targets.size() == probs->size(), "weighted_bce: " + std::to_string(targets.size()) +
                                               " targets for " + shape_string(probs->shape()));
  const std::size_t n = probs->size();
  std::vector<double> y(targets.begin(), targets.end());
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = clamp_prob(probs->data()[i]);
    loss -= pos_weight * y[i] * std::log(p) + (1.0 - y[i]) * std::log(1.0 - p);
  }
  loss /= static_cast<double>(n);
  return make_node({1}, {loss}, {probs}, [probs, y, pos_weight, n](Tensor& self) {
    const double g = self.grad()[0] / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double raw = probs->data()[i];
      if (raw < kProbEps || raw > 1.0 - kProbEps) continue;  // flat inside the clamp
      probs->grad()[i] += g * (-pos_weight * y[i] / raw + (1.0 - y[i]) / (1.0 - raw));
    }
  });
}

Var binary_cross_entropy(const Var& probs, std::span<const double> targets) {
  require(targets.size() == probs->size(), "binary_cross_entropy: target count mismatch");
  const std::size_t n = probs->size();
  std::vector<double> y(targets.begin(), targets.end());
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = clamp_prob(probs->data()[i]);
    loss += y[i] > 0.5 ? -std::log(p) : -std::log1p(-p);
  }
  loss /= static_cast<double>(n);
  return make_node({1}, {loss}, {probs}, [probs, y, n](Tensor& self) {
    const double g = self.grad()[0] / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double p = probs->data()[i];
      if (p < kProbEps || p > 1.0 - kProbEps) continue;
      probs->grad()[i] += g * (y[i] > 0.5 ? -1.0 / p : 1.0 / (1.0 - p));
    }
  });
}

Var softmax_cross_entropy(const Var& logits, std::span<const std::size_t> labels) {
  const std::size_t n = logits->rows(), c = logits->cols();
  require(labels.size() == n, "softmax_cross_entropy: " + std::to_string(labels.size()) +
                                  " labels for " + shape_string(logits->shape()));
  std::vector<double> probs(n * c);
  std::vector<std::size_t> y(labels.begin(), labels.end());
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    require(y[i] < c, "softmax_cross_entropy: label out of range");
    const auto row = std::span<const double>(logits->data()).subspan(i * c, c);
    const double mx = *std::max_element(row.begin(), row.end());
    double z = 0.0;
    for (double v : row) z += std::exp(v - mx);
    for (std::size_t j = 0; j < c; ++j) probs[i * c + j] = std::exp(row[j] - mx) / z;
    loss -= row[y[i]] - mx - std::log(z);
  }
  loss /= static_cast<double>(n);
  return make_node({1}, {loss}, {logits}, [logits, probs, y, n, c](Tensor& self) {
    const double g = self.grad()[0] / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < c; ++j)
        logits->grad()[i * c + j] += g * (probs[i * c + j] - (j == y[i] ? 1.0 : 0.0));
  });
}

Var logistic_loss(const Var& logits, std::span<const double> targets) {
  require(targets.size() == logits->size(), "logistic_loss: target count mismatch");
  const std::size_t n = logits->size();
  std::vector<double> y(targets.begin(), targets.end());
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = logits->data()[i];
    // softplus(z) - y·z, computed stably
    loss += std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))) - y[i] * z;
  }
  loss /= static_cast<double>(n);
  return make_node({1}, {loss}, {logits}, [logits, y, n](Tensor& self) {
    const double g = self.grad()[0] / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
      logits->grad()[i] += g * (sigmoid(logits->data()[i]) - y[i]);
  });
}

Var sparse_affine(std::span<const SparseVector> rows, const Var& weight, const Var& bias) {
  const std::size_t F = weight->rows(), C = weight->cols(), n = rows.size();
  require(bias->size() == C, "sparse_affine: bias " + shape_string(bias->shape()) +
                                 " incompatible with weight " + shape_string(weight->shape()));
  std::vector<double> out(n * C);
  for (std::size_t i = 0; i < n; ++i) {
    require(rows[i].extent() <= F, "sparse_affine: feature index " +
                                       std::to_string(rows[i].extent() - 1) +
                                       " outside weight " + shape_string(weight->shape()));
    for (std::size_t j = 0; j < C; ++j) out[i * C + j] = bias->data()[j];
    for (const auto& [idx, v] : rows[i].entries)
      for (std::size_t j = 0; j < C; ++j) out[i * C + j] += v * weight->data()[idx * C + j];
  }
  // Rows are borrowed; the caller keeps them alive until backward() returns.
  const SparseVector* base = rows.data();
  return make_node({n, C}, std::move(out), {weight, bias}, [base, n, C, weight, bias](Tensor& self) {
    const auto& G = self.grad();
    for (std::size_t i = 0; i < n; ++i) {
      if (weight->requires_grad())
        for (const auto& [idx, v] : base[i].entries)
          for (std::size_t j = 0; j < C; ++j) weight->grad()[idx * C + j] += v * G[i * C + j];
      if (bias->requires_grad())
        for (std::size_t j = 0; j < C; ++j) bias->grad()[j] += G[i * C + j];
    }
  });
}

}  // namespace emocpm::ad
