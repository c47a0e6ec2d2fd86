#include "ftlab/harness/config.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>

#include "ftlab/errors.hpp"

namespace ftlab::harness {

using nlohmann::json;

std::string_view schedule_name(ScheduleKind kind) noexcept {
  switch (kind) {
    case ScheduleKind::Full: return "full";
    case ScheduleKind::GradualUnfreezing: return "gu";
    case ScheduleKind::GradualUnfreezingRestart: return "gu_restart";
  }
  return "unknown";
}

namespace {

ScheduleKind parse_schedule(const std::string& s) {
  if (s == "full") return ScheduleKind::Full;
  if (s == "gu") return ScheduleKind::GradualUnfreezing;
  if (s == "gu_restart") return ScheduleKind::GradualUnfreezingRestart;
  throw ConfigError("unknown schedule '" + s + "' (expected full, gu or gu_restart)");
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [k, _] : obj.items())
    if (!keys.contains(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("invalid value for '" + std::string(key) + "' in " + where);
  }
}

void check_name(const std::string& name, const std::string& what) {
  if (name.empty()) throw ConfigError(what + " name must not be empty");
  for (char c : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == '+' ||
                    c == '=';
    if (!ok) throw ConfigError(what + " name '" + name + "' may only use letters, digits and _-.+=");
  }
}

ModelConfig parse_model(const json& j, ModelConfig m) {
  reject_unknown(j, "model", {"num_layers", "hidden", "num_heads", "ffn", "vocab", "max_seq_len", "num_classes", "seed"});
  read(j, "num_layers", m.num_layers, "model");
  read(j, "hidden", m.hidden, "model");
  read(j, "num_heads", m.num_heads, "model");
  read(j, "ffn", m.ffn, "model");
  read(j, "vocab", m.vocab, "model");
  read(j, "max_seq_len", m.max_seq_len, "model");
  read(j, "num_classes", m.num_classes, "model");
  read(j, "seed", m.seed, "model");
  return m;
}

PretrainConfig parse_pretrain(const json& j, PretrainConfig p) {
  reject_unknown(j, "pretrain", {"steps", "batch_size", "lr", "mask_prob", "seed"});
  read(j, "steps", p.steps, "pretrain");
  read(j, "batch_size", p.batch_size, "pretrain");
  read(j, "lr", p.lr, "pretrain");
  read(j, "mask_prob", p.mask_prob, "pretrain");
  read(j, "seed", p.seed, "pretrain");
  return p;
}

TaskSpec parse_task(const json& j) {
  reject_unknown(j, "tasks[]",
                 {"name", "num_train", "num_validation", "num_classes", "imbalance", "majority_label", "label_noise",
                  "seq_length", "marker_copies", "distractor_rate", "metric", "seed"});
  TaskSpec t;
  const std::string where = "task";
  read(j, "name", t.name, where);
  read(j, "num_train", t.num_train, where);
  read(j, "num_validation", t.num_validation, where);
  read(j, "num_classes", t.num_classes, where);
  read(j, "imbalance", t.imbalance, where);
  read(j, "majority_label", t.majority_label, where);
  read(j, "label_noise", t.label_noise, where);
  read(j, "seq_length", t.seq_length, where);
  read(j, "marker_copies", t.marker_copies, where);
  read(j, "distractor_rate", t.distractor_rate, where);
  read(j, "seed", t.seed, where);
  std::string metric = std::string(metric_name(t.metric));
  read(j, "metric", metric, where);
  try {
    t.metric = parse_metric(metric);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return t;
}

ClipPolicy parse_clip(const json& j) {
  reject_unknown(j, "approach clip", {"kind", "tau", "overrides"});
  std::string kind = "none";
  double tau = 1.0;
  std::map<std::string, double> overrides;
  read(j, "kind", kind, "clip");
  read(j, "tau", tau, "clip");
  read(j, "overrides", overrides, "clip");
  ClipPolicy p;
  if (kind == "none") p.kind = ClipPolicy::Kind::None;
  else if (kind == "global") p.kind = ClipPolicy::Kind::Global;
  else if (kind == "component_wise") p.kind = ClipPolicy::Kind::ComponentWise;
  else throw ConfigError("unknown clip kind '" + kind + "' (expected none, global or component_wise)");
  p.tau = tau;
  try {
    for (const auto& [path, v] : overrides) p.overrides.emplace(ComponentId(path), v);
    p.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

AdamWHyper parse_optimizer(const json& j, AdamWHyper h) {
  reject_unknown(j, "approach optimizer", {"lr", "beta1", "beta2", "eps", "weight_decay", "bias_correction"});
  read(j, "lr", h.lr, "optimizer");
  read(j, "beta1", h.beta1, "optimizer");
  read(j, "beta2", h.beta2, "optimizer");
  read(j, "eps", h.eps, "optimizer");
  read(j, "weight_decay", h.weight_decay, "optimizer");
  read(j, "bias_correction", h.bias_correction, "optimizer");
  return h;
}

ApproachSpec parse_approach(const json& j) {
  reject_unknown(j, "approaches[]", {"name", "clip", "optimizer", "schedule", "epochs", "batch_size", "warmup_fraction"});
  ApproachSpec a;
  read(j, "name", a.name, "approach");
  if (j.contains("clip")) a.clip = parse_clip(j.at("clip"));
  if (j.contains("optimizer")) a.hyper = parse_optimizer(j.at("optimizer"), a.hyper);
  std::string schedule = "full";
  read(j, "schedule", schedule, "approach");
  a.schedule = parse_schedule(schedule);
  read(j, "epochs", a.epochs, "approach");
  read(j, "batch_size", a.batch_size, "approach");
  read(j, "warmup_fraction", a.warmup_fraction, "approach");
  return a;
}

json clip_to_json(const ClipPolicy& p) {
  json j;
  switch (p.kind) {
    case ClipPolicy::Kind::None: j["kind"] = "none"; break;
    case ClipPolicy::Kind::Global: j["kind"] = "global"; break;
    case ClipPolicy::Kind::ComponentWise: j["kind"] = "component_wise"; break;
  }
  j["tau"] = p.tau;
  if (!p.overrides.empty()) {
    json o = json::object();
    for (const auto& [id, v] : p.overrides) o[id.path()] = v;
    j["overrides"] = o;
  }
  return j;
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    model.validate();
    pretrain.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (tasks.empty()) throw ConfigError("config needs at least one task");
  if (approaches.empty()) throw ConfigError("config needs at least one approach");
  std::set<std::string> names;
  for (const auto& t : tasks) {
    check_name(t.name, "task");
    if (!names.insert(t.name).second) throw ConfigError("duplicate task name '" + t.name + "'");
    try {
      t.validate(model);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  names.clear();
  for (const auto& a : approaches) {
    check_name(a.name, "approach");
    if (!names.insert(a.name).second) throw ConfigError("duplicate approach name '" + a.name + "'");
    if (a.epochs < 0) throw ConfigError("approach '" + a.name + "': epochs must be >= 0");
    if (a.schedule != ScheduleKind::Full && a.epochs < 1)
      throw ConfigError("approach '" + a.name + "': gradual unfreezing needs epochs >= 1");
    if (a.batch_size < 1) throw ConfigError("approach '" + a.name + "': batch_size must be >= 1");
    if (!(a.warmup_fraction >= 0.0 && a.warmup_fraction <= 1.0))
      throw ConfigError("approach '" + a.name + "': warmup_fraction must be in [0,1]");
    try {
      a.hyper.validate();
      a.clip.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError("approach '" + a.name + "': " + e.what());
    }
  }
  if (telemetry.step_stride < 1) throw ConfigError("telemetry.step_stride must be >= 1");
  if (benchmark.num_seeds < 1) throw ConfigError("benchmark.num_seeds must be >= 1");
  if (gu.num_seeds < 1) throw ConfigError("gu.num_seeds must be >= 1");
  if (gu.epochs_per_iteration < 1) throw ConfigError("gu.epochs_per_iteration must be >= 1");
  if (gu.max_iterations && (*gu.max_iterations < 1 || *gu.max_iterations > model.num_layers))
    throw ConfigError("gu.max_iterations must be in [1, num_layers]");
  if (sweep.thresholds.empty()) throw ConfigError("sweep.thresholds must not be empty");
  for (double t : sweep.thresholds)
    if (!(t > 0.0)) throw ConfigError("sweep thresholds must be > 0");
  gu_task();
  gu_approach();
  sweep_task();
  sweep_approach();
}

const TaskSpec& ExperimentConfig::task(const std::string& name) const {
  for (const auto& t : tasks)
    if (t.name == name) return t;
  throw ConfigError("no task named '" + name + "'");
}

const ApproachSpec& ExperimentConfig::approach(const std::string& name) const {
  for (const auto& a : approaches)
    if (a.name == name) return a;
  throw ConfigError("no approach named '" + name + "'");
}

const TaskSpec& ExperimentConfig::gu_task() const { return gu.task.empty() ? tasks.at(0) : task(gu.task); }

const ApproachSpec& ExperimentConfig::gu_approach() const {
  return gu.approach.empty() ? approaches.at(0) : approach(gu.approach);
}

const TaskSpec& ExperimentConfig::sweep_task() const {
  if (!sweep.task.empty()) return task(sweep.task);
  for (const auto& t : tasks)
    if (t.metric == Metric::Mcc) return t;
  return tasks.at(0);
}

const ApproachSpec& ExperimentConfig::sweep_approach() const {
  if (!sweep.approach.empty()) return approach(sweep.approach);
  for (const auto& a : approaches)
    if (a.name == "cwgnc") return a;
  return approaches.at(0);
}

ExperimentConfig default_config() {
  ExperimentConfig c;

  TaskSpec rte;
  rte.name = "rte_like";
  rte.imbalance = 0.5;
  rte.label_noise = 0.1;
  rte.distractor_rate = 0.3;
  rte.metric = Metric::Accuracy;
  rte.seed = 11;

  TaskSpec mrpc = rte;
  mrpc.name = "mrpc_like";
  mrpc.imbalance = 0.68;
  mrpc.majority_label = 1;
  mrpc.metric = Metric::F1;
  mrpc.seed = 12;

  TaskSpec cola = rte;
  cola.name = "cola_like";
  cola.imbalance = 0.7;
  cola.majority_label = 1;
  cola.label_noise = 0.2;
  cola.distractor_rate = 0.5;
  cola.metric = Metric::Mcc;
  cola.seed = 13;

  c.tasks = {rte, mrpc, cola};

  ApproachSpec vanilla;
  vanilla.name = "vanilla";
  vanilla.hyper.bias_correction = false;

  ApproachSpec bias;
  bias.name = "bias_correction";

  ApproachSpec small_lr;
  small_lr.name = "small_lr_long";
  small_lr.hyper.lr = bias.hyper.lr / 10.0;
  small_lr.epochs = bias.epochs * 4;

  ApproachSpec cwgnc;
  cwgnc.name = "cwgnc";
  cwgnc.clip = ClipPolicy::component_wise(0.05);

  c.approaches = {vanilla, bias, small_lr, cwgnc};
  c.gu.task = rte.name;
  c.gu.approach = bias.name;
  return c;
}

ExperimentConfig parse_config(const json& doc) {
  reject_unknown(doc, "config", {"model", "pretrain", "tasks", "approaches", "telemetry", "benchmark", "gu", "sweep"});
  ExperimentConfig c = default_config();
  if (doc.contains("model")) c.model = parse_model(doc.at("model"), c.model);
  if (doc.contains("pretrain")) c.pretrain = parse_pretrain(doc.at("pretrain"), c.pretrain);
  if (doc.contains("tasks")) {
    if (!doc.at("tasks").is_array()) throw ConfigError("tasks must be an array");
    c.tasks.clear();
    // References into the default task list no longer apply.
    c.gu.task.clear();
    c.sweep.task.clear();
    for (const auto& t : doc.at("tasks")) c.tasks.push_back(parse_task(t));
  }
  if (doc.contains("approaches")) {
    if (!doc.at("approaches").is_array()) throw ConfigError("approaches must be an array");
    c.approaches.clear();
    c.gu.approach.clear();
    c.sweep.approach.clear();
    for (const auto& a : doc.at("approaches")) c.approaches.push_back(parse_approach(a));
  }
  if (doc.contains("telemetry")) {
    const json& j = doc.at("telemetry");
    reject_unknown(j, "telemetry", {"steps", "step_stride", "deltas"});
    read(j, "steps", c.telemetry.record_steps, "telemetry");
    read(j, "step_stride", c.telemetry.step_stride, "telemetry");
    read(j, "deltas", c.telemetry.record_deltas, "telemetry");
  }
  if (doc.contains("benchmark")) {
    const json& j = doc.at("benchmark");
    reject_unknown(j, "benchmark", {"num_seeds", "base_seed"});
    read(j, "num_seeds", c.benchmark.num_seeds, "benchmark");
    read(j, "base_seed", c.benchmark.base_seed, "benchmark");
  }
  if (doc.contains("gu")) {
    const json& j = doc.at("gu");
    reject_unknown(j, "gu",
                   {"num_seeds", "epochs_per_iteration", "max_iterations", "include_head_always",
                    "include_embed_at_last", "task", "approach"});
    read(j, "num_seeds", c.gu.num_seeds, "gu");
    read(j, "epochs_per_iteration", c.gu.epochs_per_iteration, "gu");
    if (j.contains("max_iterations")) {
      int t = 0;
      read(j, "max_iterations", t, "gu");
      c.gu.max_iterations = t;
    }
    read(j, "include_head_always", c.gu.include_head_always, "gu");
    read(j, "include_embed_at_last", c.gu.include_embed_at_last, "gu");
    read(j, "task", c.gu.task, "gu");
    read(j, "approach", c.gu.approach, "gu");
  }
  if (doc.contains("sweep")) {
    const json& j = doc.at("sweep");
    reject_unknown(j, "sweep", {"thresholds", "task", "approach"});
    read(j, "thresholds", c.sweep.thresholds, "sweep");
    read(j, "task", c.sweep.task, "sweep");
    read(j, "approach", c.sweep.approach, "sweep");
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["model"] = {{"num_layers", c.model.num_layers}, {"hidden", c.model.hidden},         {"num_heads", c.model.num_heads},
                {"ffn", c.model.ffn},               {"vocab", c.model.vocab},           {"max_seq_len", c.model.max_seq_len},
                {"num_classes", c.model.num_classes}, {"seed", c.model.seed}};
  j["pretrain"] = {{"steps", c.pretrain.steps},
                   {"batch_size", c.pretrain.batch_size},
                   {"lr", c.pretrain.lr},
                   {"mask_prob", c.pretrain.mask_prob},
                   {"seed", c.pretrain.seed}};
  j["tasks"] = json::array();
  for (const auto& t : c.tasks) {
    j["tasks"].push_back({{"name", t.name},
                          {"num_train", t.num_train},
                          {"num_validation", t.num_validation},
                          {"num_classes", t.num_classes},
                          {"imbalance", t.imbalance},
                          {"majority_label", t.majority_label},
                          {"label_noise", t.label_noise},
                          {"seq_length", t.seq_length},
                          {"marker_copies", t.marker_copies},
                          {"distractor_rate", t.distractor_rate},
                          {"metric", metric_name(t.metric)},
                          {"seed", t.seed}});
  }
  j["approaches"] = json::array();
  for (const auto& a : c.approaches) {
    j["approaches"].push_back({{"name", a.name},
                               {"clip", clip_to_json(a.clip)},
                               {"optimizer",
                                {{"lr", a.hyper.lr},
                                 {"beta1", a.hyper.beta1},
                                 {"beta2", a.hyper.beta2},
                                 {"eps", a.hyper.eps},
                                 {"weight_decay", a.hyper.weight_decay},
                                 {"bias_correction", a.hyper.bias_correction}}},
                               {"schedule", schedule_name(a.schedule)},
                               {"epochs", a.epochs},
                               {"batch_size", a.batch_size},
                               {"warmup_fraction", a.warmup_fraction}});
  }
  j["telemetry"] = {{"steps", c.telemetry.record_steps},
                    {"step_stride", c.telemetry.step_stride},
                    {"deltas", c.telemetry.record_deltas}};
  j["benchmark"] = {{"num_seeds", c.benchmark.num_seeds}, {"base_seed", c.benchmark.base_seed}};
  j["gu"] = {{"num_seeds", c.gu.num_seeds},
             {"epochs_per_iteration", c.gu.epochs_per_iteration},
             {"include_head_always", c.gu.include_head_always},
             {"include_embed_at_last", c.gu.include_embed_at_last},
             {"task", c.gu.task},
             {"approach", c.gu.approach}};
  if (c.gu.max_iterations) j["gu"]["max_iterations"] = *c.gu.max_iterations;
  j["sweep"] = {{"thresholds", c.sweep.thresholds}, {"task", c.sweep.task}, {"approach", c.sweep.approach}};
  return j;
}

}  // namespace ftlab::harness
