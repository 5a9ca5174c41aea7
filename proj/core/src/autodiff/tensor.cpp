#include "emocpm/autodiff/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "emocpm/error.hpp"

namespace emocpm::ad {

std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "x" : "") << shape[i];
  os << ']';
  return os.str();
}

Tensor::Tensor(Shape shape, std::vector<double> data, bool requires_grad)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_size(shape_) != data_.size()) {
    throw ShapeError("tensor shape " + shape_string(shape_) + " does not match " +
                     std::to_string(data_.size()) + " values");
  }
  set_requires_grad(requires_grad);
}

std::size_t Tensor::rows() const noexcept {
  if (shape_.size() <= 1) return 1;
  return shape_[0];
}

std::size_t Tensor::cols() const noexcept {
  if (shape_.empty()) return 1;
  std::size_t c = 1;
  for (std::size_t i = shape_.size() == 1 ? 0 : 1; i < shape_.size(); ++i) c *= shape_[i];
  return c;
}

double Tensor::item() const {
  if (data_.size() != 1) {
    throw ShapeError("item() on tensor of shape " + shape_string(shape_));
  }
  return data_[0];
}

void Tensor::set_requires_grad(bool on) {
  requires_grad_ = on;
  if (on) {
    grad_.assign(data_.size(), 0.0);
  } else {
    grad_.clear();
  }
}

void Tensor::zero_grad() { std::fill(grad_.begin(), grad_.end(), 0.0); }

Var tensor(Shape shape, std::vector<double> data, bool requires_grad) {
  return std::make_shared<Tensor>(std::move(shape), std::move(data), requires_grad);
}

Var zeros(Shape shape, bool requires_grad) {
  const auto n = shape_size(shape);
  return tensor(std::move(shape), std::vector<double>(n, 0.0), requires_grad);
}

Var scalar(double value) { return tensor({1}, {value}); }

Var make_node(Shape shape, std::vector<double> data, std::vector<Var> parents,
              std::function<void(Tensor&)> backward_fn) {
  const bool needs = std::any_of(parents.begin(), parents.end(),
                                 [](const Var& p) { return p->requires_grad(); });
  auto node = std::make_shared<Tensor>(std::move(shape), std::move(data), needs);
  if (needs) {
    node->parents_ = std::move(parents);
    node->backward_fn_ = std::move(backward_fn);
  }
  return node;
}

void backward(const Var& root) {
  if (root->size() != 1) {
    throw ShapeError("backward() needs a single-element root, got " +
                     shape_string(root->shape()));
  }
  if (!root->requires_grad()) return;

  // Iterative post-order DFS gives a topological order.
  std::vector<Tensor*> order;
  std::unordered_set<Tensor*> visited;
  std::vector<std::pair<Tensor*, std::size_t>> stack{{root.get(), 0}};
  visited.insert(root.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents_.size()) {
      Tensor* parent = node->parents_[next++].get();
      if (parent->requires_grad() && visited.insert(parent).second) {
        stack.emplace_back(parent, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  root->grad_[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if ((*it)->backward_fn_) (*it)->backward_fn_(**it);
  }
}

}  // namespace emocpm::ad
