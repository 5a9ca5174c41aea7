#pragma once

#include <functional>
#include <span>
#include <string>

#include "emocpm/autodiff/parameter.hpp"

namespace emocpm::ad {

struct GradCheckReport {
  double max_rel_error = 0.0;
  double max_abs_analytic = 0.0;
  std::size_t entries_checked = 0;
  std::string worst_entry;  // "<tensor>[<index>]"
};

struct GradCheckOptions {
  double step = 1e-5;
  // Denominator floor for the relative error |a-n| / max(|a|, |n|, floor).
  double floor = 1e-6;
};

// Compares backward() against central finite differences for every entry of
// the named tensors. `loss` must rebuild the graph on each call and return a
// single-element tensor.
GradCheckReport gradient_check(const std::function<Var()>& loss,
                               std::span<const std::pair<std::string, Var>> wrt,
                               GradCheckOptions options = {});

// Convenience overload over all non-frozen parameters.
GradCheckReport gradient_check(const std::function<Var()>& loss, const ParameterSet& params,
                               GradCheckOptions options = {});

}  // namespace emocpm::ad
