#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace emocpm::ad {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

class Tensor;
using Var = std::shared_ptr<Tensor>;

// A node of the dynamic computation graph. Leaves are inputs or parameters;
// interior nodes carry a closure that pushes their gradient into the parents.
class Tensor {
 public:
  Tensor(Shape shape, std::vector<double> data, bool requires_grad);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return data_.size(); }
  // 2-D view: a 1-D tensor of length n is a 1×n row.
  std::size_t rows() const noexcept;
  std::size_t cols() const noexcept;

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& grad() noexcept { return grad_; }
  const std::vector<double>& grad() const noexcept { return grad_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }
  double item() const;

  bool requires_grad() const noexcept { return requires_grad_; }
  // Toggling on allocates a zero gradient; toggling off drops it.
  void set_requires_grad(bool on);
  void zero_grad();

  const std::vector<Var>& parents() const noexcept { return parents_; }

 private:
  friend Var make_node(Shape, std::vector<double>, std::vector<Var>,
                       std::function<void(Tensor&)>);
  friend void backward(const Var&);

  Shape shape_;
  std::vector<double> data_;
  std::vector<double> grad_;
  bool requires_grad_ = false;
  std::vector<Var> parents_;
  std::function<void(Tensor&)> backward_fn_;
};

Var tensor(Shape shape, std::vector<double> data, bool requires_grad = false);
Var zeros(Shape shape, bool requires_grad = false);
Var scalar(double value);

// Builds an interior node. requires_grad is inherited from the parents; the
// closure is dropped when no parent needs a gradient.
Var make_node(Shape shape, std::vector<double> data, std::vector<Var> parents,
              std::function<void(Tensor&)> backward_fn);

// Reverse sweep from a single-element root; gradients accumulate into leaves.
void backward(const Var& root);

}  // namespace emocpm::ad
