#include "emocpm/data/metrics.hpp"

#include <iomanip>
#include <ostream>

#include <json.hpp>

#include "emocpm/error.hpp"

namespace emocpm::data {

double f1_score(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricsReport evaluate(const std::vector<LabeledItem>& gold,
                       const std::vector<LabeledItem>& predicted,
                       const std::vector<std::string>& inventory) {
  if (gold.size() != predicted.size()) {
    throw DataError("evaluate: " + std::to_string(gold.size()) + " gold vs " +
                    std::to_string(predicted.size()) + " predicted items");
  }
  const std::size_t C = inventory.size();
  MetricsReport report;
  report.classes.resize(C);
  for (std::size_t c = 0; c < C; ++c) report.classes[c].label = inventory[c];

  std::vector<std::uint8_t> g(C), p(C);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].id != predicted[i].id) {
      throw DataError("evaluate: id mismatch at position " + std::to_string(i) + " (" +
                      gold[i].id + " vs " + predicted[i].id + ")");
    }
    std::fill(g.begin(), g.end(), 0);
    std::fill(p.begin(), p.end(), 0);
    for (std::size_t l : gold[i].labels) {
      if (l >= C) throw DataError("evaluate: gold label index out of range for " + gold[i].id);
      g[l] = 1;
    }
    for (std::size_t l : predicted[i].labels) {
      if (l >= C) throw DataError("evaluate: predicted label index out of range for " + gold[i].id);
      p[l] = 1;
    }
    for (std::size_t c = 0; c < C; ++c) {
      auto& m = report.classes[c];
      if (g[c] && p[c]) ++m.tp;
      if (!g[c] && p[c]) ++m.fp;
      if (g[c] && !p[c]) ++m.fn;
      if (g[c]) ++m.support;
    }
  }

  std::size_t tp = 0, fp = 0, fn = 0;
  for (auto& m : report.classes) {
    m.precision = ratio(m.tp, m.tp + m.fp);
    m.recall = ratio(m.tp, m.tp + m.fn);
    m.f1 = f1_score(m.precision, m.recall);
    report.macro_precision += m.precision;
    report.macro_recall += m.recall;
    report.macro_f1 += m.f1;
    tp += m.tp;
    fp += m.fp;
    fn += m.fn;
  }
  if (C > 0) {
    report.macro_precision /= static_cast<double>(C);
    report.macro_recall /= static_cast<double>(C);
    report.macro_f1 /= static_cast<double>(C);
  }
  report.micro_precision = ratio(tp, tp + fp);
  report.micro_recall = ratio(tp, tp + fn);
  report.micro_f1 = f1_score(report.micro_precision, report.micro_recall);
  return report;
}

void write_metrics_tsv(std::ostream& out, const MetricsReport& report) {
  std::size_t support = 0;
  out << "class\tP\tR\tF1\tsupport\n" << std::fixed << std::setprecision(4);
  for (const auto& m : report.classes) {
    out << m.label << '\t' << m.precision << '\t' << m.recall << '\t' << m.f1 << '\t' << m.support
        << '\n';
    support += m.support;
  }
  out << "macro\t" << report.macro_precision << '\t' << report.macro_recall << '\t'
      << report.macro_f1 << '\t' << support << '\n';
  out << "micro\t" << report.micro_precision << '\t' << report.micro_recall << '\t'
      << report.micro_f1 << '\t' << support << '\n';
  out.unsetf(std::ios::floatfield);
}

std::string metrics_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["classes"] = nlohmann::ordered_json::array();
  for (const auto& m : report.classes) {
    j["classes"].push_back({{"label", m.label},
                            {"tp", m.tp},
                            {"fp", m.fp},
                            {"fn", m.fn},
                            {"support", m.support},
                            {"precision", m.precision},
                            {"recall", m.recall},
                            {"f1", m.f1}});
  }
  j["macro"] = {{"precision", report.macro_precision},
                {"recall", report.macro_recall},
                {"f1", report.macro_f1}};
  j["micro"] = {{"precision", report.micro_precision},
                {"recall", report.micro_recall},
                {"f1", report.micro_f1}};
  return j.dump(2);
}

}  // namespace emocpm::data
