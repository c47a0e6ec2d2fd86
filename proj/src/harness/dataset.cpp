#include "ftlab/harness/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ftlab/errors.hpp"

namespace ftlab::harness {

void TaskSpec::validate(const ModelConfig& model) const {
  auto fail = [&](const std::string& why) { return InvalidArgument("task '" + name + "': " + why); };
  if (num_train < 1 || num_validation < 1) throw fail("split sizes must be >= 1");
  if (num_classes < 2) throw fail("num_classes must be >= 2");
  if (num_classes != model.num_classes)
    throw fail("num_classes " + std::to_string(num_classes) + " differs from the model's " +
               std::to_string(model.num_classes));
  if (!(imbalance > 0.0 && imbalance < 1.0)) throw fail("imbalance must be in (0,1)");
  if (imbalance * num_classes < 1.0 - 1e-12) throw fail("imbalance below 1/num_classes leaves no majority class");
  if (majority_label < 0 || majority_label >= num_classes) throw fail("majority_label out of range");
  if (!(label_noise >= 0.0 && label_noise < 0.5)) throw fail("label_noise must be in [0,0.5)");
  if (!(distractor_rate >= 0.0 && distractor_rate <= 1.0)) throw fail("distractor_rate must be in [0,1]");
  if (marker_copies < 1) throw fail("marker_copies must be >= 1");
  if (seq_length > model.max_seq_len) throw fail("seq_length exceeds the model's max_seq_len");
  if (seq_length < 1 + (marker_copies - 1) * num_classes)
    throw fail("seq_length too short for the marker copies of every class");
  if (model.vocab < num_classes + 2) throw fail("vocabulary too small for markers plus noise tokens");
  if ((metric == Metric::F1 || metric == Metric::Mcc) && num_classes != 2)
    throw fail("f1 and mcc need a binary task");
}

namespace {

std::vector<std::size_t> split_labels(const TaskSpec& spec, int n, std::mt19937_64& rng) {
  const auto C = static_cast<std::size_t>(spec.num_classes);
  const auto major = static_cast<std::size_t>(spec.majority_label);
  const auto total = static_cast<std::size_t>(n);
  const auto n_major = std::min(total, static_cast<std::size_t>(std::llround(spec.imbalance * n)));
  std::vector<std::size_t> labels(n_major, major);
  const std::size_t rest = total - n_major;
  std::size_t slot = 0;
  for (std::size_t c = 0; c < C; ++c) {
    if (c == major) continue;
    const std::size_t share = rest / (C - 1) + (slot < rest % (C - 1) ? 1 : 0);
    labels.insert(labels.end(), share, c);
    ++slot;
  }
  std::shuffle(labels.begin(), labels.end(), rng);
  return labels;
}

std::vector<std::size_t> make_sequence(const TaskSpec& spec, const ModelConfig& model, std::size_t pattern,
                                       std::mt19937_64& rng) {
  const auto C = static_cast<std::size_t>(spec.num_classes);
  const auto S = static_cast<std::size_t>(spec.seq_length);
  const auto copies = static_cast<std::size_t>(spec.marker_copies);
  std::uniform_int_distribution<std::size_t> noise(C + 1, static_cast<std::size_t>(model.vocab) - 1);
  std::vector<std::size_t> seq(S);
  for (auto& t : seq) t = noise(rng);

  std::vector<std::size_t> markers(copies, 1 + pattern);
  std::binomial_distribution<std::size_t> distract(copies - 1, spec.distractor_rate);
  for (std::size_t c = 0; c < C; ++c) {
    if (c == pattern) continue;
    markers.insert(markers.end(), distract(rng), 1 + c);
  }
  std::vector<std::size_t> positions(S);
  std::iota(positions.begin(), positions.end(), 0);
  std::shuffle(positions.begin(), positions.end(), rng);
  for (std::size_t i = 0; i < markers.size(); ++i) seq[positions[i]] = markers[i];
  return seq;
}

Dataset make_split(const TaskSpec& spec, const ModelConfig& model, int n, std::mt19937_64& rng) {
  const std::vector<std::size_t> labels = split_labels(spec, n, rng);
  const auto C = static_cast<std::size_t>(spec.num_classes);
  const auto n_noisy = static_cast<std::size_t>(std::llround(spec.label_noise * n));
  std::vector<std::size_t> idx(labels.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<bool> noisy(labels.size(), false);
  for (std::size_t i = 0; i < n_noisy && i < idx.size(); ++i) noisy[idx[i]] = true;

  std::uniform_int_distribution<std::size_t> shift(1, C - 1);
  Dataset out;
  out.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::size_t pattern = noisy[i] ? (labels[i] + shift(rng)) % C : labels[i];
    out.push_back(Example{make_sequence(spec, model, pattern, rng), labels[i]});
  }
  return out;
}

}  // namespace

TaskData gen_dataset(const TaskSpec& spec, const ModelConfig& model) {
  spec.validate(model);
  std::mt19937_64 rng(spec.seed);
  TaskData data;
  data.name = spec.name;
  data.metric = spec.metric;
  data.num_classes = static_cast<std::size_t>(spec.num_classes);
  data.train = make_split(spec, model, spec.num_train, rng);
  data.validation = make_split(spec, model, spec.num_validation, rng);
  return data;
}

std::vector<std::size_t> class_counts(const Dataset& data, std::size_t num_classes) {
  std::vector<std::size_t> counts(num_classes, 0);
  for (const auto& ex : data) {
    if (ex.label >= num_classes) throw InvalidArgument("label out of range");
    ++counts[ex.label];
  }
  return counts;
}

}  // namespace ftlab::harness
