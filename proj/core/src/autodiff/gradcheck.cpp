#include "emocpm/autodiff/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "emocpm/error.hpp"

namespace emocpm::ad {

GradCheckReport gradient_check(const std::function<Var()>& loss,
                               std::span<const std::pair<std::string, Var>> wrt,
                               GradCheckOptions options) {
  for (const auto& [name, t] : wrt) {
    if (!t->requires_grad()) throw StateError("gradient_check: " + name + " is not tracked");
    t->zero_grad();
  }
  backward(loss());

  std::vector<std::vector<double>> analytic;
  analytic.reserve(wrt.size());
  for (const auto& [_, t] : wrt) {
    analytic.push_back(t->grad());
    t->zero_grad();
  }

  GradCheckReport report;
  for (std::size_t k = 0; k < wrt.size(); ++k) {
    const auto& [name, t] = wrt[k];
    auto& data = t->data();
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double saved = data[i];
      data[i] = saved + options.step;
      const double up = loss()->item();
      data[i] = saved - options.step;
      const double down = loss()->item();
      data[i] = saved;
      const double numeric = (up - down) / (2.0 * options.step);
      const double a = analytic[k][i];
      const double denom = std::max({std::abs(a), std::abs(numeric), options.floor});
      const double rel = std::abs(a - numeric) / denom;
      report.max_abs_analytic = std::max(report.max_abs_analytic, std::abs(a));
      ++report.entries_checked;
      if (rel > report.max_rel_error || report.worst_entry.empty()) {
        report.max_rel_error = std::max(rel, report.max_rel_error);
        if (rel >= report.max_rel_error) report.worst_entry = name + "[" + std::to_string(i) + "]";
      }
    }
  }
  return report;
}

GradCheckReport gradient_check(const std::function<Var()>& loss, const ParameterSet& params,
                               GradCheckOptions options) {
  std::vector<std::pair<std::string, Var>> wrt;
  for (const auto& p : params.items())
    if (!p.frozen && p.value->requires_grad()) wrt.emplace_back(p.name, p.value);
  return gradient_check(loss, wrt, options);
}

}  // namespace emocpm::ad
