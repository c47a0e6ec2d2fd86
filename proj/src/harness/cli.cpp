#include "ftlab/harness/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ftlab/errors.hpp"
#include "ftlab/harness/dataset.hpp"
#include "ftlab/harness/experiments.hpp"
#include "ftlab/harness/report.hpp"
#include "ftlab/model/pretrain.hpp"
#include "ftlab/telemetry/emit.hpp"

namespace ftlab::harness {

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  int parallel = 1;
  std::string pretrained_path;
};

ExperimentConfig load(const GlobalOptions& g) {
  ExperimentConfig config = g.config_path.empty() ? default_config() : load_config(g.config_path);
  if (g.seed) config.benchmark.base_seed = *g.seed;
  if (g.parallel < 1) throw ConfigError("--parallel must be >= 1");
  config.validate();
  return config;
}

Snapshot obtain_pretrained(const ExperimentConfig& config, const GlobalOptions& g) {
  if (!g.pretrained_path.empty()) {
    Snapshot snap = load_snapshot(g.pretrained_path);
    Model probe = Model::build(config.model);
    try {
      restore(probe, snap, LayerSelector::all());
    } catch (const Error& e) {
      throw ConfigError("pretrained snapshot does not match the model config: " + std::string(e.what()));
    }
    return snap;
  }
  Model model = Model::build(config.model);
  PretrainResult r = pretrain(model, config.pretrain);
  std::cerr << "pretrained: masked-token loss " << r.initial_loss << " -> " << r.final_loss << "\n";
  return r.snapshot;
}

// Writes the outputs, then reports failed runs. Partial results stay on disk.
int finish(const fs::path& dir, const ExperimentOutput& out, const std::string& report) {
  write_experiment(dir, out, report);
  std::cout << report;
  int code = kExitOk;
  for (const auto& e : out.errors) {
    std::cerr << (e.numeric ? "numerical failure in run " : "run failed: ") << e.run_id << ": " << e.message << "\n";
    if (e.numeric) code = kExitNumeric;
    else if (code == kExitOk) code = kExitError;
  }
  return code;
}

int cmd_pretrain(const GlobalOptions& g) {
  const ExperimentConfig config = load(g);
  Model model = Model::build(config.model);
  PretrainResult r = pretrain(model, config.pretrain);
  const fs::path dir(g.out_dir);
  fs::create_directories(dir);
  save_snapshot(r.snapshot, dir / "pretrained.snap");
  const std::string report = "masked-token loss: initial " + format_double(r.initial_loss) + ", final " +
                             format_double(r.final_loss) + "\n";
  write_text(dir / "report.txt", report);
  std::cout << report;
  return kExitOk;
}

int cmd_finetune(const GlobalOptions& g, const std::string& approach_name, const std::string& task_name, int runs) {
  ExperimentConfig config = load(g);
  const ApproachSpec& approach = approach_name.empty() ? config.approaches.front() : config.approach(approach_name);
  const TaskSpec& task = task_name.empty() ? config.tasks.front() : config.task(task_name);
  if (runs < 1) throw ConfigError("--runs must be >= 1");
  ExperimentConfig narrowed = config;
  narrowed.approaches = {approach};
  narrowed.tasks = {task};
  narrowed.benchmark.num_seeds = runs;
  narrowed.gu.task = narrowed.gu.approach = narrowed.sweep.task = narrowed.sweep.approach = "";
  const Snapshot pretrained = obtain_pretrained(narrowed, g);
  const ExperimentOutput out = run_benchmark(narrowed, pretrained, ExecOptions{g.parallel});
  return finish(g.out_dir, out, render_benchmark_table(out.cells));
}

int cmd_benchmark(const GlobalOptions& g) {
  const ExperimentConfig config = load(g);
  const Snapshot pretrained = obtain_pretrained(config, g);
  const ExperimentOutput out = run_benchmark(config, pretrained, ExecOptions{g.parallel});
  return finish(g.out_dir, out, render_benchmark_table(out.cells));
}

int cmd_sweep(const GlobalOptions& g, const std::vector<double>& thresholds) {
  ExperimentConfig config = load(g);
  if (!thresholds.empty()) config.sweep.thresholds = thresholds;
  config.validate();
  const Snapshot pretrained = obtain_pretrained(config, g);
  const ExperimentOutput out = run_threshold_sweep(config, pretrained, ExecOptions{g.parallel});
  return finish(g.out_dir, out, render_sweep_table(out.cells));
}

int cmd_gu(const GlobalOptions& g) {
  const ExperimentConfig config = load(g);
  const Snapshot pretrained = obtain_pretrained(config, g);
  const GuOutput out = run_gu_experiment(config, pretrained, ExecOptions{g.parallel});
  const fs::path dir(g.out_dir);
  const std::string report = render_trajectory(out.trajectory);
  const int code = finish(dir, out.experiment, report);
  write_trajectory_json(dir / "trajectory.json", out.trajectory);
  return code;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"ftlab: fine-tuning stability lab on a tiny transformer"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", g.seed, "base seed for run seeds");
  app.add_option("--parallel", g.parallel, "runs executed concurrently")->capture_default_str();
  app.add_option("--pretrained", g.pretrained_path, "pretrained snapshot; pretrain in-process when absent")
      ->check(CLI::ExistingFile);

  auto* pre = app.add_subcommand("pretrain", "pretrain the toy model and write pretrained.snap");
  std::string approach_name;
  std::string task_name;
  int runs = 1;
  auto* ft = app.add_subcommand("finetune", "fine-tune one approach on one task");
  ft->add_option("--approach", approach_name, "approach name (default: first)");
  ft->add_option("--task", task_name, "task name (default: first)");
  ft->add_option("--runs", runs, "number of seeds")->capture_default_str();
  auto* gu = app.add_subcommand("gu", "gradual unfreezing trajectories (gu, gu_restart, full)");
  auto* bench = app.add_subcommand("benchmark", "every approach on every task over num_seeds runs");
  std::vector<double> thresholds;
  auto* sweep = app.add_subcommand("sweep", "component-wise clipping threshold sweep");
  sweep->add_option("--thresholds", thresholds, "override the threshold grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (pre->parsed()) return cmd_pretrain(g);
    if (ft->parsed()) return cmd_finetune(g, approach_name, task_name, runs);
    if (gu->parsed()) return cmd_gu(g);
    if (bench->parsed()) return cmd_benchmark(g);
    if (sweep->parsed()) return cmd_sweep(g, thresholds);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace ftlab::harness
