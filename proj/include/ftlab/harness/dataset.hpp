#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ftlab/model/model.hpp"
#include "ftlab/schedule/data.hpp"

namespace ftlab::harness {

// Synthetic "which marker is most frequent" classification task.
//
// Tokens 1..C are class markers and tokens above C are noise. A sequence of
// class c holds `marker_copies` copies of marker c at random positions; every
// other marker appears Binomial(marker_copies - 1, distractor_rate) times, so
// the class marker always wins the count. `imbalance` is the fraction of examples carrying `majority_label`;
// the remaining examples are spread evenly over the other classes. A fraction
// `label_noise` of examples is drawn with the pattern of a different class
// than its label, so class proportions stay exact.
struct TaskSpec {
  std::string name = "task";
  int num_train = 256;
  int num_validation = 200;
  int num_classes = 2;
  double imbalance = 0.5;
  int majority_label = 0;
  double label_noise = 0.0;
  int seq_length = 16;
  int marker_copies = 3;
  double distractor_rate = 0.0;
  Metric metric = Metric::Accuracy;
  std::uint64_t seed = 0;

  void validate(const ModelConfig& model) const;
};

TaskData gen_dataset(const TaskSpec& spec, const ModelConfig& model);

// Per-split label counts (index = class).
std::vector<std::size_t> class_counts(const Dataset& data, std::size_t num_classes);

}  // namespace ftlab::harness
