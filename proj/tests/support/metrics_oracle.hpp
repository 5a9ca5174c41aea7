#pragma once

// Brute-force counting reference for evaluate(). It scans every
// (instance, label) pair with set lookups and shares no code with the
// library implementation.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace oracle {

struct Counts {
  std::vector<long> tp, fp, fn;
  std::vector<double> p, r, f1;
  double macro_p = 0, macro_r = 0, macro_f1 = 0, micro_p = 0, micro_r = 0, micro_f1 = 0;
};

inline Counts count_metrics(const std::vector<std::vector<std::size_t>>& gold,
                            const std::vector<std::vector<std::size_t>>& pred, std::size_t classes) {
  Counts c;
  c.tp.assign(classes, 0);
  c.fp.assign(classes, 0);
  c.fn.assign(classes, 0);
  for (std::size_t label = 0; label < classes; ++label) {
    for (std::size_t i = 0; i < gold.size(); ++i) {
      const std::set<std::size_t> g(gold[i].begin(), gold[i].end());
      const std::set<std::size_t> p(pred[i].begin(), pred[i].end());
      const bool in_g = g.count(label) > 0, in_p = p.count(label) > 0;
      c.tp[label] += in_g && in_p;
      c.fp[label] += !in_g && in_p;
      c.fn[label] += in_g && !in_p;
    }
  }
  auto safe = [](double a, double b) { return b == 0 ? 0.0 : a / b; };
  auto harm = [](double p, double r) { return p + r == 0 ? 0.0 : 2 * p * r / (p + r); };
  long TP = 0, FP = 0, FN = 0;
  for (std::size_t k = 0; k < classes; ++k) {
    c.p.push_back(safe(c.tp[k], c.tp[k] + c.fp[k]));
    c.r.push_back(safe(c.tp[k], c.tp[k] + c.fn[k]));
    c.f1.push_back(harm(c.p.back(), c.r.back()));
    TP += c.tp[k];
    FP += c.fp[k];
    FN += c.fn[k];
  }
  for (std::size_t k = 0; k < classes; ++k) {
    c.macro_p += c.p[k] / classes;
    c.macro_r += c.r[k] / classes;
    c.macro_f1 += c.f1[k] / classes;
  }
  c.micro_p = safe(TP, TP + FP);
  c.micro_r = safe(TP, TP + FN);
  c.micro_f1 = harm(c.micro_p, c.micro_r);
  return c;
}

}  // namespace oracle
