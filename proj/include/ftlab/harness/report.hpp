#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "ftlab/harness/experiments.hpp"

namespace ftlab::harness {

// Approaches as rows, tasks as column groups of Std/Mean/Max/Failed. Values
// are scaled by 100 and printed with one decimal, rows and columns in
// first-seen order.
std::string render_benchmark_table(std::span<const AggregateCell> cells);

// One row per threshold with Std/Mean/Max/Failed on the sweep task.
std::string render_sweep_table(std::span<const AggregateCell> cells);

// Per-iteration mean and std of each method.
std::string render_trajectory(std::span<const TrajectoryPoint> points);

void write_trajectory_json(const std::filesystem::path& path, std::span<const TrajectoryPoint> points);

// runs.json, aggregate.json, steps.csv, deltas.csv and report.txt.
void write_experiment(const std::filesystem::path& dir, const ExperimentOutput& out, const std::string& report);

}  // namespace ftlab::harness
