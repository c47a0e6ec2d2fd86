#include "ftlab/harness/metrics.hpp"

#include <cmath>
#include <string>

#include "ftlab/errors.hpp"

namespace ftlab::harness {

namespace {

void require_lengths(std::span<const std::size_t> p, std::span<const std::size_t> l) {
  if (p.size() != l.size())
    throw InvalidArgument("metric: " + std::to_string(p.size()) + " predictions for " + std::to_string(l.size()) +
                          " labels");
  if (p.empty()) throw InvalidArgument("metric: empty input");
}

}  // namespace

ConfusionCounts confusion_counts(std::span<const std::size_t> predictions, std::span<const std::size_t> labels) {
  require_lengths(predictions, labels);
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predictions[i] > 1 || labels[i] > 1) throw InvalidArgument("f1/mcc require binary labels");
    const bool p = predictions[i] == 1, t = labels[i] == 1;
    if (p && t) ++c.tp;
    else if (p && !t) ++c.fp;
    else if (!p && t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double metric_accuracy(std::span<const std::size_t> predictions, std::span<const std::size_t> labels) {
  require_lengths(predictions, labels);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (predictions[i] == labels[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

double f1_from_counts(const ConfusionCounts& c) {
  const double denom = 2.0 * static_cast<double>(c.tp) + static_cast<double>(c.fp) + static_cast<double>(c.fn);
  return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / denom;
}

double mcc_from_counts(const ConfusionCounts& c) {
  const double tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
  const double fn = static_cast<double>(c.fn), tn = static_cast<double>(c.tn);
  const double a = tp + fp, b = tp + fn, d = tn + fp, e = tn + fn;
  if (a == 0.0 || b == 0.0 || d == 0.0 || e == 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(a * b * d * e);
}

double metric_f1(std::span<const std::size_t> predictions, std::span<const std::size_t> labels) {
  return f1_from_counts(confusion_counts(predictions, labels));
}

double metric_mcc(std::span<const std::size_t> predictions, std::span<const std::size_t> labels) {
  return mcc_from_counts(confusion_counts(predictions, labels));
}

double evaluate_metric(Metric metric, std::span<const std::size_t> predictions, std::span<const std::size_t> labels) {
  switch (metric) {
    case Metric::Accuracy: return metric_accuracy(predictions, labels);
    case Metric::F1: return metric_f1(predictions, labels);
    case Metric::Mcc: return metric_mcc(predictions, labels);
  }
  throw InvalidArgument("unknown metric");
}

}  // namespace ftlab::harness
