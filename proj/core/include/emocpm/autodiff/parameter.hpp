#pragma once

#include <string>
#include <vector>

#include "emocpm/autodiff/tensor.hpp"
#include "emocpm/random.hpp"

namespace emocpm::ad {

struct Parameter {
  std::string name;
  Var value;
  bool frozen = false;
};

// Ordered, name-addressable collection of trainable tensors.
class ParameterSet {
 public:
  // Creates a zero-valued parameter; names must be unique.
  Var add(const std::string& name, Shape shape);
  Var add_glorot(const std::string& name, Shape shape, std::size_t fan_in, std::size_t fan_out,
                 Rng& rng);

  const Parameter* find(const std::string& name) const;
  Var at(const std::string& name) const;

  std::vector<Parameter>& items() noexcept { return items_; }
  const std::vector<Parameter>& items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }
  std::size_t scalar_count() const;

  // Freezing also removes the tensor from gradient tracking.
  void freeze_prefix(const std::string& prefix);
  void zero_grad();

  // Copies values (not flags) from every same-named, same-shaped parameter
  // of `other` whose name starts with from_prefix, renaming the prefix.
  // Returns the number of parameters copied.
  std::size_t copy_from(const ParameterSet& other, const std::string& from_prefix = "",
                        const std::string& to_prefix = "");

  std::vector<std::vector<double>> snapshot() const;
  void restore(const std::vector<std::vector<double>>& values);

 private:
  std::vector<Parameter> items_;
};

}  // namespace emocpm::ad
