#pragma once

#include "ftlab/harness/config.hpp"
#include "ftlab/harness/dataset.hpp"
#include "ftlab/schedule/trainer.hpp"
#include "support/generators.hpp"

namespace ftlab::testing {

inline harness::TaskSpec tiny_task_spec(Metric metric = Metric::Accuracy) {
  harness::TaskSpec t;
  t.name = "tiny";
  t.num_train = 24;
  t.num_validation = 16;
  t.seq_length = 6;
  t.marker_copies = 2;
  t.imbalance = 0.625;
  t.majority_label = 1;
  t.label_noise = 0.1;
  t.distractor_rate = 0.3;
  t.metric = metric;
  t.seed = 5;
  return t;
}

inline TaskData tiny_task(Metric metric = Metric::Accuracy) {
  return harness::gen_dataset(tiny_task_spec(metric), tiny_model_config());
}

inline TrainOptions tiny_options() {
  TrainOptions o;
  o.hyper.lr = 2e-3;
  o.batch_size = 8;
  return o;
}

// A complete experiment small enough for unit tests.
inline harness::ExperimentConfig tiny_experiment() {
  harness::ExperimentConfig c = harness::default_config();
  c.model = tiny_model_config();
  c.pretrain.steps = 5;
  c.pretrain.batch_size = 4;
  c.tasks = {tiny_task_spec(Metric::Mcc)};
  c.approaches.resize(2);
  c.approaches[0].name = "plain";
  c.approaches[0].clip = ClipPolicy::none();
  c.approaches[1].name = "cwgnc";
  c.approaches[1].clip = ClipPolicy::component_wise(0.05);
  for (auto& a : c.approaches) {
    a.epochs = 2;
    a.batch_size = 8;
    a.hyper.lr = 2e-3;
    a.hyper.bias_correction = true;
  }
  c.benchmark.num_seeds = 2;
  c.gu = harness::GuSettings{};
  c.gu.num_seeds = 2;
  c.gu.epochs_per_iteration = 1;
  c.sweep = harness::SweepSettings{};
  c.sweep.thresholds = {0.05, 1e12};
  return c;
}

}  // namespace ftlab::testing
