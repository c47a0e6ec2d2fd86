#pragma once

#include <cstddef>
#include <span>

#include "ftlab/telemetry/records.hpp"

namespace ftlab::harness {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
};

// Binary confusion counts with label 1 as the positive class.
ConfusionCounts confusion_counts(std::span<const std::size_t> predictions, std::span<const std::size_t> labels);

double metric_accuracy(std::span<const std::size_t> predictions, std::span<const std::size_t> labels);
// 2TP/(2TP+FP+FN); 0 when the denominator is 0.
double metric_f1(std::span<const std::size_t> predictions, std::span<const std::size_t> labels);
// Matthews correlation; 0 when any marginal is empty.
double metric_mcc(std::span<const std::size_t> predictions, std::span<const std::size_t> labels);

double f1_from_counts(const ConfusionCounts& c);
double mcc_from_counts(const ConfusionCounts& c);

double evaluate_metric(Metric metric, std::span<const std::size_t> predictions, std::span<const std::size_t> labels);

}  // namespace ftlab::harness
