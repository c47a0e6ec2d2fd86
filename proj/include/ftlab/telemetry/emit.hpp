#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ftlab/telemetry/records.hpp"

namespace ftlab {

inline constexpr const char* kStepsCsvHeader = "run_id,iteration,step,component,pre_norm,post_norm,loss,lr";
inline constexpr const char* kDeltasCsvHeader =
    "run_id,iteration,reference,layer,component,rmsd,cosine,layer_max_rmsd,layer_min_cosine";

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

// One row per (step, component). Doubles round-trip exactly.
void write_steps_csv(const std::filesystem::path& path, std::span<const StepRecord> records);
std::vector<StepRecord> read_steps_csv(const std::filesystem::path& path);

// One row per (record, component); layer summaries repeat on each row.
void write_deltas_csv(const std::filesystem::path& path, std::span<const DeltaRecord> records);
std::vector<DeltaRecord> read_deltas_csv(const std::filesystem::path& path);

void write_runs_json(const std::filesystem::path& path, std::span<const RunResult> runs);
std::vector<RunResult> read_runs_json(const std::filesystem::path& path);

void write_aggregates_json(const std::filesystem::path& path, std::span<const AggregateCell> cells);
std::vector<AggregateCell> read_aggregates_json(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ftlab
