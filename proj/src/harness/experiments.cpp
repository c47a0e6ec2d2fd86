#include "ftlab/harness/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>

#include "ftlab/errors.hpp"
#include "ftlab/harness/dataset.hpp"
#include "ftlab/telemetry/aggregate.hpp"
#include "ftlab/telemetry/emit.hpp"

namespace ftlab::harness {

namespace {

constexpr std::uint64_t kHeadSalt = 0x48454144ULL;

struct Job {
  const ApproachSpec* approach = nullptr;
  const TaskData* task = nullptr;
  int index = 0;
};

struct JobOutput {
  std::optional<RunResult> result;
  std::vector<IterationResult> iterations;
  TelemetrySink sink;
  std::optional<RunError> error;
};

// Runs fn(i, out) for every job slot, concurrently when workers > 1. Each
// slot catches its own exceptions so one bad run never hides the others.
template <typename Fn>
std::vector<JobOutput> execute(std::size_t count, int workers, const TelemetryOptions& telemetry,
                               const std::vector<std::string>& run_ids, Fn&& fn) {
  std::vector<JobOutput> outputs;
  outputs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) outputs.push_back(JobOutput{{}, {}, TelemetrySink(telemetry), {}});
  const int threads = std::max(1, workers);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (threads > 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    JobOutput& out = outputs[static_cast<std::size_t>(i)];
    try {
      fn(static_cast<std::size_t>(i), out);
    } catch (const NumericError& e) {
      out.error = RunError{run_ids[static_cast<std::size_t>(i)], e.what(), true};
    } catch (const std::exception& e) {
      out.error = RunError{run_ids[static_cast<std::size_t>(i)], e.what(), false};
    }
  }
  return outputs;
}

// Job order is (approach, task, index); merging in that order keeps the
// output independent of completion order.
ExperimentOutput collect(std::vector<JobOutput>& outputs, const TelemetryOptions& telemetry) {
  ExperimentOutput out{{}, {}, TelemetrySink(telemetry), {}};
  for (auto& o : outputs) {
    if (o.result) out.runs.push_back(*o.result);
    if (o.error) out.errors.push_back(*o.error);
    out.telemetry.merge(std::move(o.sink));
  }
  return out;
}

std::vector<AggregateCell> aggregate_cells(const std::vector<RunResult>& runs) {
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::vector<RunResult>> groups;
  for (const auto& r : runs) {
    auto key = std::make_pair(r.approach, r.task);
    if (!groups.contains(key)) order.push_back(key);
    groups[key].push_back(r);
  }
  std::vector<AggregateCell> cells;
  for (const auto& key : order) {
    const auto& group = groups.at(key);
    cells.push_back(AggregateCell{key.first, key.second, group.front().metric, aggregate_runs(group)});
  }
  return cells;
}

std::vector<TaskData> make_tasks(const ExperimentConfig& config, const std::vector<const TaskSpec*>& specs) {
  std::vector<TaskData> tasks;
  tasks.reserve(specs.size());
  for (const TaskSpec* s : specs) tasks.push_back(gen_dataset(*s, config.model));
  return tasks;
}

ExperimentOutput run_grid(const ExperimentConfig& config, const Snapshot& pretrained,
                          const std::vector<ApproachSpec>& approaches, const std::vector<TaskData>& tasks,
                          int num_seeds, const ExecOptions& exec) {
  std::vector<Job> jobs;
  std::vector<std::string> ids;
  for (const auto& a : approaches)
    for (const auto& t : tasks)
      for (int i = 0; i < num_seeds; ++i) {
        jobs.push_back(Job{&a, &t, i});
        ids.push_back(make_run_id(a.name, t.name, i));
      }
  auto outputs = execute(jobs.size(), exec.workers, config.telemetry, ids, [&](std::size_t i, JobOutput& out) {
    const Job& job = jobs[i];
    out.result = run_single(config, pretrained, *job.approach, *job.task, job.index, out.sink);
  });
  ExperimentOutput out = collect(outputs, config.telemetry);
  out.cells = aggregate_cells(out.runs);
  return out;
}

GUConfig gu_config(const ExperimentConfig& config, int epochs, bool restart) {
  GUConfig g;
  g.epochs_per_iteration = epochs;
  g.max_iterations = config.gu.max_iterations;
  g.restart = restart;
  g.include_head_always = config.gu.include_head_always;
  g.include_embed_at_last = config.gu.include_embed_at_last;
  return g;
}

RunResult result_from(const RunContext& ctx, const TaskData& task, double value) {
  RunResult r;
  r.run_id = ctx.run_id;
  r.approach = ctx.approach;
  r.task = task.name;
  r.seed = ctx.seed;
  r.metric = task.metric;
  r.value = value;
  const MajorityBaseline base = majority_baseline(task);
  r.majority_baseline = base.value;
  r.failed = classify_run(value, task.metric, base) == RunOutcome::Failed;
  return r;
}

}  // namespace

std::uint64_t name_hash(std::string_view name) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t run_seed(std::uint64_t base_seed, std::string_view task, int index) noexcept {
  return mix_seed(mix_seed(base_seed, name_hash(task)), static_cast<std::uint64_t>(index));
}

std::string make_run_id(std::string_view approach, std::string_view task, int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03d", index);
  return std::string(approach) + "/" + std::string(task) + "/" + buf;
}

TrainOptions train_options(const ApproachSpec& approach) {
  TrainOptions o;
  o.hyper = approach.hyper;
  o.clip = approach.clip;
  o.batch_size = approach.batch_size;
  o.warmup_fraction = approach.warmup_fraction;
  return o;
}

Model prepare_model(const ModelConfig& config, const Snapshot& pretrained, std::uint64_t seed) {
  Model model = Model::build(config);
  restore(model, pretrained, LayerSelector::all());
  model.reinit_head(mix_seed(seed, kHeadSalt));
  return model;
}

RunResult run_single(const ExperimentConfig& config, const Snapshot& pretrained, const ApproachSpec& approach,
                     const TaskData& task, int index, TelemetrySink& sink) {
  const std::uint64_t seed = run_seed(config.benchmark.base_seed, task.name, index);
  Model model = prepare_model(config.model, pretrained, seed);
  const Snapshot init = snapshot(model, "pretrained");
  RunContext ctx{make_run_id(approach.name, task.name, index), approach.name, task.name, seed, &sink, {}};
  const TrainOptions options = train_options(approach);
  if (approach.schedule == ScheduleKind::Full)
    return run_full_finetune(model, init, task, approach.epochs, options, ctx);
  const bool restart = approach.schedule == ScheduleKind::GradualUnfreezingRestart;
  const auto iterations = run_gradual_unfreezing(model, init, task, gu_config(config, approach.epochs, restart),
                                                 options, ctx);
  return result_from(ctx, task, iterations.back().value);
}

ExperimentOutput run_benchmark(const ExperimentConfig& config, const Snapshot& pretrained, const ExecOptions& exec) {
  config.validate();
  std::vector<const TaskSpec*> specs;
  for (const auto& t : config.tasks) specs.push_back(&t);
  const auto tasks = make_tasks(config, specs);
  return run_grid(config, pretrained, config.approaches, tasks, config.benchmark.num_seeds, exec);
}

std::string sweep_row_name(double tau) { return "tau=" + format_double(tau); }

ExperimentOutput run_threshold_sweep(const ExperimentConfig& config, const Snapshot& pretrained,
                                     const ExecOptions& exec) {
  config.validate();
  const auto tasks = make_tasks(config, {&config.sweep_task()});
  std::vector<ApproachSpec> rows;
  for (double tau : config.sweep.thresholds) {
    ApproachSpec a = config.sweep_approach();
    a.name = sweep_row_name(tau);
    a.clip = ClipPolicy::component_wise(tau);
    rows.push_back(a);
  }
  return run_grid(config, pretrained, rows, tasks, config.benchmark.num_seeds, exec);
}

GuOutput run_gu_experiment(const ExperimentConfig& config, const Snapshot& pretrained, const ExecOptions& exec) {
  config.validate();
  const TaskData task = gen_dataset(config.gu_task(), config.model);
  const ApproachSpec& base = config.gu_approach();
  const TrainOptions options = train_options(base);
  const std::vector<std::string> methods{"gu", "gu_restart", "full"};
  const int epochs = config.gu.epochs_per_iteration;

  std::vector<std::pair<std::string, int>> jobs;
  std::vector<std::string> ids;
  for (const auto& m : methods)
    for (int i = 0; i < config.gu.num_seeds; ++i) {
      jobs.emplace_back(m, i);
      ids.push_back(make_run_id(m, task.name, i));
    }

  auto outputs = execute(jobs.size(), exec.workers, config.telemetry, ids, [&](std::size_t i, JobOutput& out) {
    const auto& [method, index] = jobs[i];
    const std::uint64_t seed = run_seed(config.benchmark.base_seed, task.name, index);
    Model model = prepare_model(config.model, pretrained, seed);
    const Snapshot init = snapshot(model, "pretrained");
    RunContext ctx{ids[i], method, task.name, seed, &out.sink, {}};
    if (method == "full") {
      out.result = run_full_finetune(model, init, task, epochs, options, ctx);
      return;
    }
    out.iterations = run_gradual_unfreezing(model, init, task, gu_config(config, epochs, method == "gu_restart"),
                                            options, ctx);
    out.result = result_from(ctx, task, out.iterations.back().value);
  });

  GuOutput gu;
  const int iterations = gu_config(config, epochs, false).iterations(config.model.num_layers);
  for (std::size_t m = 0; m < methods.size(); ++m) {
    const auto begin = m * static_cast<std::size_t>(config.gu.num_seeds);
    const auto end = begin + static_cast<std::size_t>(config.gu.num_seeds);
    const int first = methods[m] == "full" ? iterations - 1 : 0;
    for (int k = first; k < iterations; ++k) {
      std::vector<double> values;
      for (std::size_t j = begin; j < end; ++j) {
        const JobOutput& o = outputs[j];
        if (!o.result) continue;
        values.push_back(methods[m] == "full" ? o.result->value : o.iterations.at(static_cast<std::size_t>(k)).value);
      }
      if (!values.empty()) gu.trajectory.push_back(TrajectoryPoint{methods[m], k, aggregate_values(values)});
    }
  }
  gu.experiment = collect(outputs, config.telemetry);
  gu.experiment.cells = aggregate_cells(gu.experiment.runs);
  return gu;
}

}  // namespace ftlab::harness
