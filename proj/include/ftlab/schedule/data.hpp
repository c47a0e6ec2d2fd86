#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ftlab/telemetry/records.hpp"

namespace ftlab {

struct Example {
  std::vector<std::size_t> tokens;
  std::size_t label = 0;
};

using Dataset = std::vector<Example>;

// A classification task split into train and validation sets. All examples
// share one sequence length.
struct TaskData {
  std::string name;
  Metric metric = Metric::Accuracy;
  std::size_t num_classes = 2;
  Dataset train;
  Dataset validation;
};

}  // namespace ftlab
