#include "ftlab/telemetry/emit.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ftlab/errors.hpp"

namespace ftlab {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw IoError("cannot format double");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw IoError("malformed number '" + std::string(text) + "'");
  return v;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

void finish(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw IoError("write failed for " + path.string());
}

const std::string& csv_field(const std::string& s, const std::filesystem::path& path) {
  if (s.find_first_of(",\"\n\r") != std::string::npos)
    throw IoError("value '" + s + "' cannot be written unquoted to " + path.string());
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

long long parse_int(const std::string& s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw IoError("malformed integer '" + s + "'");
  return v;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path, const char* header,
                                               std::size_t columns) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != header) throw IoError("unexpected header in " + path.string());
  std::vector<std::vector<std::string>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != columns)
      throw IoError("row with " + std::to_string(fields.size()) + " fields in " + path.string());
    rows.push_back(std::move(fields));
  }
  return rows;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& doc) {
  auto os = open_out(path);
  os << doc.dump(2) << '\n';
  finish(os, path);
}

}  // namespace

void write_steps_csv(const std::filesystem::path& path, std::span<const StepRecord> records) {
  auto os = open_out(path);
  os << kStepsCsvHeader << '\n';
  for (const auto& r : records) {
    const std::string prefix = csv_field(r.run_id, path) + "," + std::to_string(r.iteration) + "," +
                               std::to_string(r.step) + ",";
    const std::string suffix = "," + format_double(r.loss) + "," + format_double(r.lr) + "\n";
    for (const auto& n : r.norms)
      os << prefix << csv_field(n.component.path(), path) << ',' << format_double(n.pre_norm) << ','
         << format_double(n.post_norm) << suffix;
  }
  finish(os, path);
}

std::vector<StepRecord> read_steps_csv(const std::filesystem::path& path) {
  std::vector<StepRecord> out;
  for (auto& f : read_csv(path, kStepsCsvHeader, 8)) {
    const int iteration = static_cast<int>(parse_int(f[1]));
    const std::int64_t step = parse_int(f[2]);
    if (out.empty() || out.back().run_id != f[0] || out.back().iteration != iteration || out.back().step != step) {
      StepRecord r;
      r.run_id = f[0];
      r.iteration = iteration;
      r.step = step;
      r.loss = parse_double(f[6]);
      r.lr = parse_double(f[7]);
      out.push_back(std::move(r));
    }
    out.back().norms.push_back(ComponentNorm{ComponentId(f[3]), parse_double(f[4]), parse_double(f[5])});
  }
  return out;
}

void write_deltas_csv(const std::filesystem::path& path, std::span<const DeltaRecord> records) {
  auto os = open_out(path);
  os << kDeltasCsvHeader << '\n';
  for (const auto& r : records) {
    for (const auto& layer : r.layers) {
      for (const auto& c : layer.components) {
        os << csv_field(r.run_id, path) << ',' << r.iteration << ',' << reference_name(r.reference) << ','
           << csv_field(layer.layer, path) << ',' << csv_field(c.component.path(), path) << ','
           << format_double(c.rmsd) << ',' << format_double(c.cosine) << ',' << format_double(layer.max_rmsd) << ','
           << format_double(layer.min_cosine) << '\n';
      }
    }
  }
  finish(os, path);
}

std::vector<DeltaRecord> read_deltas_csv(const std::filesystem::path& path) {
  std::vector<DeltaRecord> out;
  for (auto& f : read_csv(path, kDeltasCsvHeader, 9)) {
    const int iteration = static_cast<int>(parse_int(f[1]));
    const DeltaReference ref = parse_reference(f[2]);
    if (out.empty() || out.back().run_id != f[0] || out.back().iteration != iteration ||
        out.back().reference != ref) {
      DeltaRecord r;
      r.run_id = f[0];
      r.iteration = iteration;
      r.reference = ref;
      out.push_back(std::move(r));
    }
    auto& layers = out.back().layers;
    if (layers.empty() || layers.back().layer != f[3]) {
      LayerDelta ld;
      ld.layer = f[3];
      ld.max_rmsd = parse_double(f[7]);
      ld.min_cosine = parse_double(f[8]);
      layers.push_back(std::move(ld));
    }
    layers.back().components.push_back(ComponentDelta{ComponentId(f[4]), parse_double(f[5]), parse_double(f[6])});
  }
  return out;
}

void write_runs_json(const std::filesystem::path& path, std::span<const RunResult> runs) {
  json doc = json::array();
  for (const auto& r : runs) {
    doc.push_back({{"run_id", r.run_id},
                   {"approach", r.approach},
                   {"task", r.task},
                   {"seed", r.seed},
                   {"metric", metric_name(r.metric)},
                   {"value", r.value},
                   {"failed", r.failed},
                   {"majority_baseline", r.majority_baseline}});
  }
  write_json(path, doc);
}

std::vector<RunResult> read_runs_json(const std::filesystem::path& path) {
  std::vector<RunResult> out;
  try {
    for (const auto& j : read_json(path)) {
      RunResult r;
      r.run_id = j.at("run_id").get<std::string>();
      r.approach = j.at("approach").get<std::string>();
      r.task = j.at("task").get<std::string>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.metric = parse_metric(j.at("metric").get<std::string>());
      r.value = j.at("value").get<double>();
      r.failed = j.at("failed").get<bool>();
      r.majority_baseline = j.at("majority_baseline").get<double>();
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw IoError("malformed runs file " + path.string() + ": " + e.what());
  }
  return out;
}

void write_aggregates_json(const std::filesystem::path& path, std::span<const AggregateCell> cells) {
  json doc = json::array();
  for (const auto& c : cells) {
    doc.push_back({{"approach", c.approach},
                   {"task", c.task},
                   {"metric", metric_name(c.metric)},
                   {"n", c.aggregate.n},
                   {"std", c.aggregate.std},
                   {"mean", c.aggregate.mean},
                   {"max", c.aggregate.max},
                   {"failed_fraction", c.aggregate.failed_fraction}});
  }
  write_json(path, doc);
}

std::vector<AggregateCell> read_aggregates_json(const std::filesystem::path& path) {
  std::vector<AggregateCell> out;
  try {
    for (const auto& j : read_json(path)) {
      AggregateCell c;
      c.approach = j.at("approach").get<std::string>();
      c.task = j.at("task").get<std::string>();
      c.metric = parse_metric(j.at("metric").get<std::string>());
      c.aggregate.n = j.at("n").get<std::size_t>();
      c.aggregate.std = j.at("std").get<double>();
      c.aggregate.mean = j.at("mean").get<double>();
      c.aggregate.max = j.at("max").get<double>();
      c.aggregate.failed_fraction = j.at("failed_fraction").get<double>();
      out.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw IoError("malformed aggregate file " + path.string() + ": " + e.what());
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto os = open_out(path);
  os << text;
  finish(os, path);
}

}  // namespace ftlab
