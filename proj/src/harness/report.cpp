#include "ftlab/harness/report.hpp"

#include <cstdio>
#include <map>
#include <vector>

#include <json.hpp>

#include "ftlab/errors.hpp"
#include "ftlab/telemetry/emit.hpp"

namespace ftlab::harness {

namespace {

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

template <typename T>
void push_unique(std::vector<T>& v, const T& x) {
  for (const auto& y : v)
    if (y == x) return;
  v.push_back(x);
}

constexpr std::size_t kCol = 8;

}  // namespace

std::string render_benchmark_table(std::span<const AggregateCell> cells) {
  std::vector<std::string> approaches;
  std::vector<std::string> tasks;
  std::map<std::pair<std::string, std::string>, const AggregateCell*> index;
  std::map<std::string, Metric> metric;
  std::size_t name_width = 8;
  for (const auto& c : cells) {
    push_unique(approaches, c.approach);
    push_unique(tasks, c.task);
    index[{c.approach, c.task}] = &c;
    metric[c.task] = c.metric;
    name_width = std::max(name_width, c.approach.size() + 2);
  }

  std::string out = pad_right("", name_width);
  for (const auto& t : tasks) {
    const std::string title = t + " (" + std::string(metric_name(metric[t])) + ")";
    out += " | " + pad_right(title, 4 * kCol);
  }
  out += "\n" + pad_right("approach", name_width);
  for (std::size_t i = 0; i < tasks.size(); ++i)
    out += " | " + pad("Std", kCol) + pad("Mean", kCol) + pad("Max", kCol) + pad("Failed%", kCol);
  out += "\n" + std::string(name_width + tasks.size() * (3 + 4 * kCol), '-') + "\n";
  for (const auto& a : approaches) {
    out += pad_right(a, name_width);
    for (const auto& t : tasks) {
      out += " | ";
      const auto it = index.find({a, t});
      if (it == index.end()) {
        out += pad("-", kCol) + pad("-", kCol) + pad("-", kCol) + pad("-", kCol);
        continue;
      }
      const Aggregate& g = it->second->aggregate;
      out += pad(pct(g.std), kCol) + pad(pct(g.mean), kCol) + pad(pct(g.max), kCol) + pad(pct(g.failed_fraction), kCol);
    }
    out += "\n";
  }
  return out;
}

std::string render_sweep_table(std::span<const AggregateCell> cells) {
  std::size_t name_width = 10;
  for (const auto& c : cells) name_width = std::max(name_width, c.approach.size() + 2);
  std::string out;
  if (!cells.empty())
    out += "task " + cells.front().task + " (" + std::string(metric_name(cells.front().metric)) + ")\n";
  out += pad_right("threshold", name_width) + pad("Std", kCol) + pad("Mean", kCol) + pad("Max", kCol) +
         pad("Failed%", kCol) + "\n";
  out += std::string(name_width + 4 * kCol, '-') + "\n";
  for (const auto& c : cells) {
    const Aggregate& g = c.aggregate;
    out += pad_right(c.approach, name_width) + pad(pct(g.std), kCol) + pad(pct(g.mean), kCol) + pad(pct(g.max), kCol) +
           pad(pct(g.failed_fraction), kCol) + "\n";
  }
  return out;
}

std::string render_trajectory(std::span<const TrajectoryPoint> points) {
  std::string out = pad_right("method", 12) + pad("iter", 6) + pad("Mean", kCol) + pad("Std", kCol) + pad("n", 4) + "\n";
  out += std::string(12 + 6 + 2 * kCol + 4, '-') + "\n";
  for (const auto& p : points) {
    out += pad_right(p.method, 12) + pad(std::to_string(p.iteration), 6) + pad(pct(p.aggregate.mean), kCol) +
           pad(pct(p.aggregate.std), kCol) + pad(std::to_string(p.aggregate.n), 4) + "\n";
  }
  return out;
}

void write_trajectory_json(const std::filesystem::path& path, std::span<const TrajectoryPoint> points) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& p : points) {
    doc.push_back({{"method", p.method},
                   {"iteration", p.iteration},
                   {"n", p.aggregate.n},
                   {"mean", p.aggregate.mean},
                   {"std", p.aggregate.std},
                   {"max", p.aggregate.max}});
  }
  write_text(path, doc.dump(2) + "\n");
}

void write_experiment(const std::filesystem::path& dir, const ExperimentOutput& out, const std::string& report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  write_runs_json(dir / "runs.json", out.runs);
  write_aggregates_json(dir / "aggregate.json", out.cells);
  write_steps_csv(dir / "steps.csv", out.telemetry.steps());
  write_deltas_csv(dir / "deltas.csv", out.telemetry.deltas());
  write_text(dir / "report.txt", report);
}

}  // namespace ftlab::harness
