#include "emocpm/autodiff/parameter.hpp"

#include <cmath>

#include "emocpm/error.hpp"

namespace emocpm::ad {

Var ParameterSet::add(const std::string& name, Shape shape) {
  if (find(name) != nullptr) throw StateError("duplicate parameter name " + name);
  Var v = zeros(std::move(shape), true);
  items_.push_back({name, v, false});
  return v;
}

Var ParameterSet::add_glorot(const std::string& name, Shape shape, std::size_t fan_in,
                             std::size_t fan_out, Rng& rng) {
  Var v = add(name, std::move(shape));
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& x : v->data()) x = rng.uniform(-limit, limit);
  return v;
}

const Parameter* ParameterSet::find(const std::string& name) const {
  for (const auto& p : items_)
    if (p.name == name) return &p;
  return nullptr;
}

Var ParameterSet::at(const std::string& name) const {
  const Parameter* p = find(name);
  if (p == nullptr) throw LookupError("no parameter named " + name);
  return p->value;
}

std::size_t ParameterSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : items_) n += p.value->size();
  return n;
}

void ParameterSet::freeze_prefix(const std::string& prefix) {
  for (auto& p : items_) {
    if (p.name.starts_with(prefix)) {
      p.frozen = true;
      p.value->set_requires_grad(false);
    }
  }
}

void ParameterSet::zero_grad() {
  for (auto& p : items_) p.value->zero_grad();
}

std::size_t ParameterSet::copy_from(const ParameterSet& other, const std::string& from_prefix,
                                    const std::string& to_prefix) {
  std::size_t copied = 0;
  for (const auto& src : other.items_) {
    if (!src.name.starts_with(from_prefix)) continue;
    const std::string target = to_prefix + src.name.substr(from_prefix.size());
    for (auto& dst : items_) {
      if (dst.name == target && dst.value->shape() == src.value->shape()) {
        dst.value->data() = src.value->data();
        ++copied;
      }
    }
  }
  return copied;
}

std::vector<std::vector<double>> ParameterSet::snapshot() const {
  std::vector<std::vector<double>> out;
  out.reserve(items_.size());
  for (const auto& p : items_) out.push_back(p.value->data());
  return out;
}

void ParameterSet::restore(const std::vector<std::vector<double>>& values) {
  if (values.size() != items_.size()) throw StateError("snapshot does not match parameter set");
  for (std::size_t i = 0; i < values.size(); ++i) items_[i].value->data() = values[i];
}

}  // namespace emocpm::ad
