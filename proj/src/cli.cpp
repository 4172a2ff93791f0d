#include "gantt/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gantt/energy.hpp"
#include "gantt/error.hpp"
#include "gantt/exact_solver.hpp"
#include "gantt/gnn_scheduler.hpp"
#include "gantt/greedy.hpp"
#include "gantt/instance.hpp"
#include "gantt/io.hpp"
#include "gantt/rng.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace gantt::cli {

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kEmptyDataset, "quantile of no values");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

std::vector<std::string> dataset_files(const std::string& dir) {
  std::vector<std::string> files;
  const fs::path root(dir);
  if (!fs::is_directory(root)) throw Error(ErrorCode::kIoError, "not a directory: " + dir);
  const fs::path manifest = root / "manifest.json";
  if (fs::exists(manifest)) {
    try {
      const auto doc = nlohmann::json::parse(read_file(manifest.string()));
      for (const auto& entry : doc.at("files")) files.push_back((root / entry.at("file").get<std::string>()).string());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, "manifest.json: " + std::string(e.what()));
    }
  } else {
    for (const auto& entry : fs::directory_iterator(root)) {
      if (entry.path().extension() == ".json" && entry.path().filename() != "manifest.json") {
        files.push_back(entry.path().string());
      }
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

namespace {

struct Globals {
  std::uint64_t seed = 0;
  int workers = 1;
  std::string format = "json";
};

struct SchedulerOptions {
  std::string bundle_path;
  double time_limit = 60.0;
  std::int64_t max_nodes = SolverBudget{}.max_search_nodes;
  std::string tie_break = "lowest_node_id";
  int max_retries = FailSafePolicy{}.max_retries;
  std::string fallback = "heuristic";
};

struct Outcome {
  Schedule schedule;
  RunRecord record;
  bool budget_exhausted = false;
};

std::string fmt_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(threads, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

ordered_json record_json(const RunRecord& r) {
  ordered_json j;
  j["instance"] = r.instance;
  j["scheduler"] = r.scheduler;
  j["carriers"] = r.metrics.carriers;
  j["length"] = r.metrics.length;
  j["objective"] = r.metrics.objective;
  j["wall_seconds"] = r.wall_seconds;
  j["valid"] = r.valid;
  if (r.proved_optimal) j["proved_optimal"] = *r.proved_optimal;
  if (r.retries) j["retries"] = *r.retries;
  if (r.fallback_used) j["fallback_used"] = *r.fallback_used;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

Outcome run_scheduler(const std::string& name, const ProblemInstance& inst, const std::string& label,
                      const SchedulerOptions& opt, const WeightBundle* bundle, std::uint64_t seed) {
  Outcome out;
  out.record.instance = label;
  out.record.scheduler = name;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (name == "greedy") {
      out.schedule = solve_greedy(inst, {tie_break_from_string(opt.tie_break)});
    } else if (name == "optimal") {
      SolveResult r = solve_optimal(inst, SolverBudget{opt.time_limit, opt.max_nodes});
      out.schedule = std::move(r.schedule);
      out.record.proved_optimal = r.stats.proved_optimal;
      out.budget_exhausted = !r.stats.proved_optimal;
    } else if (name == "gnn") {
      if (bundle == nullptr) throw Error(ErrorCode::kBadConfig, "gnn needs --bundle");
      FailSafePolicy policy;
      policy.max_retries = opt.max_retries;
      policy.rng_seed = seed;
      policy.fallback = opt.fallback == "abort" ? Fallback::kAbort : Fallback::kHeuristic;
      GnnResult r = schedule_gnn(inst, *bundle, policy);
      out.schedule = std::move(r.schedule);
      out.record.retries = r.stats.retries_used;
      out.record.fallback_used = r.stats.fallback_used;
    } else {
      throw Error(ErrorCode::kBadConfig, "unknown scheduler '" + name + "'");
    }
  } catch (const Error& e) {
    out.record.error = e.what();
  }
  out.record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (out.record.error.empty()) {
    out.record.valid = validate(inst, out.schedule, false).ok;
    out.record.metrics = raw_metrics(inst.tag_count(), out.schedule);
  }
  return out;
}

std::pair<int, int> parse_range(const std::string& text, const std::string& what) {
  const auto dots = text.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      const int v = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {v, v};
    }
    const int lo = std::stoi(text.substr(0, dots), &used);
    if (used != dots) throw std::invalid_argument(text);
    const std::string rest = text.substr(dots + 2);
    const int hi = std::stoi(rest, &used);
    if (used != rest.size() || hi < lo) throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kBadConfig, what + " must be an integer or a range lo..hi, got '" + text + "'");
  }
}

std::string file_stem(const std::string& path) { return fs::path(path).stem().string(); }

// --- subcommands ---------------------------------------------------------

struct GenArgs {
  std::string n = "10";
  std::string t = "14";
  int count = 1;
  double density = 1.0;
  double radius = 1.5;
  int dimensions = 2;
  int max_attempts = 10000;
  std::string out_dir;
};

int cmd_gen(const GenArgs& a, const Globals& g, std::ostream& out) {
  const auto [n_lo, n_hi] = parse_range(a.n, "--n");
  const auto [t_lo, t_hi] = parse_range(a.t, "--t");
  if (a.count < 0) throw Error(ErrorCode::kBadConfig, "--count must be >= 0");
  fs::create_directories(a.out_dir);

  struct Entry {
    std::string file;
    GeneratorConfig cfg;
  };
  std::vector<Entry> entries(static_cast<std::size_t>(a.count));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    Rng pick(mix_seed(g.seed + i));
    GeneratorConfig cfg;
    cfg.n = n_lo + static_cast<int>(pick.below(static_cast<std::uint64_t>(n_hi - n_lo + 1)));
    cfg.t = t_lo + static_cast<int>(pick.below(static_cast<std::uint64_t>(t_hi - t_lo + 1)));
    cfg.density = a.density;
    cfg.radius = a.radius;
    cfg.dimensions = a.dimensions;
    cfg.max_attempts = a.max_attempts;
    cfg.seed = pick.next();
    char name[32];
    std::snprintf(name, sizeof name, "instance_%05zu.json", i);
    entries[i] = {name, cfg};
  }
  std::mutex fail_mutex;
  std::string failure;
  parallel_for(entries.size(), g.workers, [&](std::size_t i) {
    try {
      save_instance(generate_random_geometric(entries[i].cfg), (fs::path(a.out_dir) / entries[i].file).string());
    } catch (const Error& e) {
      std::lock_guard lock(fail_mutex);
      if (failure.empty()) failure = entries[i].file + ": " + e.what();
    }
  });
  if (!failure.empty()) throw Error(ErrorCode::kGenerationBudgetExceeded, failure);

  ordered_json manifest;
  manifest["config"] = {{"n", a.n},           {"t", a.t},
                        {"count", a.count},   {"density", a.density},
                        {"radius", a.radius}, {"dimensions", a.dimensions},
                        {"seed", g.seed}};
  auto files = ordered_json::array();
  for (const auto& e : entries) {
    files.push_back({{"file", e.file}, {"n", e.cfg.n}, {"t", e.cfg.t}, {"seed", e.cfg.seed}});
  }
  manifest["files"] = std::move(files);
  write_file((fs::path(a.out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
  out << ordered_json{{"dir", a.out_dir}, {"count", a.count}}.dump() << "\n";
  return kOk;
}

struct SolveArgs {
  std::string scheduler;
  std::string instance;
  std::string out_path;
  std::string stats_path;
  SchedulerOptions opt;
};

void write_record_csv(std::ostream& out, const RunRecord& r) {
  out << "instance,scheduler,carriers,length,objective,wall_seconds,valid,proved_optimal,retries,fallback_used,"
         "error\r\n";
  out << csv_field(r.instance) << ',' << csv_field(r.scheduler) << ',' << r.metrics.carriers << ','
      << r.metrics.length << ',' << r.metrics.objective << ',' << fmt_number(r.wall_seconds) << ','
      << (r.valid ? "true" : "false") << ',' << (r.proved_optimal ? (*r.proved_optimal ? "true" : "false") : "")
      << ',' << (r.retries ? std::to_string(*r.retries) : "") << ','
      << (r.fallback_used ? (*r.fallback_used ? "true" : "false") : "") << ',' << csv_field(r.error) << "\r\n";
}

int cmd_solve(const SolveArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const ProblemInstance inst = load_instance(a.instance);
  std::optional<WeightBundle> bundle;
  if (!a.opt.bundle_path.empty()) bundle = load_bundle(a.opt.bundle_path);
  if (a.scheduler == "gnn" && !bundle) throw Error(ErrorCode::kBadConfig, "gnn needs --bundle");
  const Outcome o = run_scheduler(a.scheduler, inst, file_stem(a.instance), a.opt, bundle ? &*bundle : nullptr,
                                  g.seed);
  if (!o.record.error.empty()) {
    err << o.record.error << "\n";
    return o.record.error.starts_with("Abort") ? kValidationFailure : kBadArgs;
  }
  const std::string sched_text = serialize_schedule(o.schedule);
  if (!a.out_path.empty()) write_file(a.out_path, sched_text + "\n");
  if (!a.stats_path.empty()) write_file(a.stats_path, record_json(o.record).dump(2) + "\n");
  if (g.format == "csv") {
    write_record_csv(out, o.record);
  } else {
    ordered_json doc;
    doc["schedule"] = ordered_json::parse(sched_text);
    doc["stats"] = record_json(o.record);
    out << doc.dump() << "\n";
  }
  if (!o.record.valid) return kValidationFailure;
  if (o.budget_exhausted) {
    err << "budget exhausted; returned the best incumbent\n";
    return kBudgetExhausted;
  }
  return kOk;
}

int cmd_validate_instance(const std::vector<std::string>& paths, const Globals& g, std::ostream& out) {
  bool all_ok = true;
  if (g.format == "csv") out << "file,ok,n,t,error\r\n";
  for (const auto& path : paths) {
    ordered_json j;
    j["file"] = path;
    std::string error;
    int n = 0, t = 0;
    try {
      const auto inst = load_instance(path);
      n = inst.node_count();
      t = inst.tag_count();
    } catch (const Error& e) {
      error = e.what();
      all_ok = false;
    }
    if (g.format == "csv") {
      out << csv_field(path) << ',' << (error.empty() ? "true" : "false") << ',' << n << ',' << t << ','
          << csv_field(error) << "\r\n";
    } else {
      j["ok"] = error.empty();
      if (error.empty()) {
        j["n"] = n;
        j["t"] = t;
      } else {
        j["error"] = error;
      }
      out << j.dump() << "\n";
    }
  }
  return all_ok ? kOk : kValidationFailure;
}

int cmd_validate_schedule(const std::string& inst_path, const std::string& sched_path, bool strict,
                          const Globals& g, std::ostream& out) {
  const auto inst = load_instance(inst_path);
  const auto sched = parse_schedule(read_file(sched_path));
  const auto report = validate(inst, sched, strict);
  if (g.format == "csv") {
    out << "slot,kind,nodes,tags,message\r\n";
    for (const auto& v : report.violations) {
      std::string nodes, tags;
      for (auto id : v.nodes) nodes += (nodes.empty() ? "" : " ") + std::to_string(id.value());
      for (auto id : v.tags) tags += (tags.empty() ? "" : " ") + std::to_string(id.value());
      out << (v.slot ? std::to_string(*v.slot + 1) : "") << ',' << violation_label(v.kind) << ','
          << csv_field(nodes) << ',' << csv_field(tags) << ',' << csv_field(v.message) << "\r\n";
    }
  } else {
    out << serialize_report(report) << "\n";
  }
  return report.ok ? kOk : kValidationFailure;
}

struct CompareArgs {
  std::string dataset;
  std::vector<std::string> schedulers{"greedy", "optimal"};
  std::string baseline = "greedy";
  std::string out_path;
  bool keep_invalid = false;
  SchedulerOptions opt;
};

const std::vector<std::string> kCompareColumns = {
    "row",           "instance",        "scheduler",   "n",
    "t",             "carriers",        "length",      "objective",
    "wall_seconds",  "valid",           "carriers_saved", "timeslots_saved",
    "percent_carriers_saved", "percent_timeslots_saved", "energy_per_tag_j", "proved_optimal",
    "retries",       "fallback_used",   "error"};

// Numeric columns summarized by mean/p10/p90.
const std::vector<std::string> kSummaryColumns = {
    "n", "t", "carriers", "length", "objective", "wall_seconds", "carriers_saved", "timeslots_saved",
    "percent_carriers_saved", "percent_timeslots_saved", "energy_per_tag_j", "retries"};

int cmd_compare(const CompareArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  if (std::find(a.schedulers.begin(), a.schedulers.end(), a.baseline) == a.schedulers.end()) {
    throw Error(ErrorCode::kBadConfig, "baseline '" + a.baseline + "' is not among --schedulers");
  }
  const auto files = dataset_files(a.dataset);
  std::optional<WeightBundle> bundle;
  if (!a.opt.bundle_path.empty()) bundle = load_bundle(a.opt.bundle_path);

  // One row map per (instance, scheduler), in file order then scheduler order.
  using Row = std::map<std::string, std::string>;
  const std::size_t k = a.schedulers.size();
  std::vector<Row> rows(files.size() * k);
  std::vector<char> keep(rows.size(), 1);
  std::atomic<int> failures{0};
  std::atomic<int> exhausted{0};

  parallel_for(files.size(), g.workers, [&](std::size_t i) {
    const std::string label = file_stem(files[i]);
    std::optional<ProblemInstance> inst;
    std::string load_error;
    try {
      inst = load_instance(files[i]);
    } catch (const Error& e) {
      load_error = e.what();
    }
    std::vector<Outcome> outcomes;
    for (const auto& name : a.schedulers) {
      if (!inst) {
        Outcome o;
        o.record.instance = label;
        o.record.scheduler = name;
        o.record.error = load_error;
        outcomes.push_back(std::move(o));
        continue;
      }
      outcomes.push_back(run_scheduler(name, *inst, label, a.opt, bundle ? &*bundle : nullptr, mix_seed(g.seed + i)));
    }
    const auto base_it = std::find(a.schedulers.begin(), a.schedulers.end(), a.baseline);
    const Outcome& base = outcomes[static_cast<std::size_t>(base_it - a.schedulers.begin())];
    for (std::size_t s = 0; s < k; ++s) {
      const Outcome& o = outcomes[s];
      const RunRecord& r = o.record;
      Row row;
      row["row"] = "instance";
      row["instance"] = label;
      row["scheduler"] = r.scheduler;
      if (inst) {
        row["n"] = std::to_string(inst->node_count());
        row["t"] = std::to_string(inst->tag_count());
      }
      if (r.error.empty()) {
        row["carriers"] = std::to_string(r.metrics.carriers);
        row["length"] = std::to_string(r.metrics.length);
        row["objective"] = std::to_string(r.metrics.objective);
        row["valid"] = r.valid ? "true" : "false";
        if (inst->tag_count() > 0) {
          row["energy_per_tag_j"] = fmt_number(energy_per_tag(r.metrics.carriers, inst->tag_count()));
        }
        if (base.record.error.empty()) {
          row["carriers_saved"] = std::to_string(carriers_saved(base.record.metrics, r.metrics));
          row["timeslots_saved"] = std::to_string(timeslots_saved(base.record.metrics, r.metrics));
          if (base.record.metrics.carriers > 0) {
            row["percent_carriers_saved"] = fmt_number(percent_carriers_saved(base.record.metrics, r.metrics));
          }
          if (base.record.metrics.length > 0) {
            row["percent_timeslots_saved"] = fmt_number(percent_timeslots_saved(base.record.metrics, r.metrics));
          }
        }
      } else {
        ++failures;
      }
      row["wall_seconds"] = fmt_number(r.wall_seconds);
      if (r.proved_optimal) row["proved_optimal"] = *r.proved_optimal ? "true" : "false";
      if (r.retries) row["retries"] = std::to_string(*r.retries);
      if (r.fallback_used) row["fallback_used"] = *r.fallback_used ? "true" : "false";
      row["error"] = r.error;
      if (o.budget_exhausted) ++exhausted;
      if (r.error.empty() && !r.valid) {
        ++failures;
        if (!a.keep_invalid) keep[i * k + s] = 0;
      }
      rows[i * k + s] = std::move(row);
    }
  });

  std::string csv;
  for (std::size_t c = 0; c < kCompareColumns.size(); ++c) csv += (c ? "," : "") + kCompareColumns[c];
  csv += "\r\n";
  auto emit = [&](const Row& row) {
    for (std::size_t c = 0; c < kCompareColumns.size(); ++c) {
      const auto it = row.find(kCompareColumns[c]);
      csv += (c ? "," : "") + csv_field(it == row.end() ? "" : it->second);
    }
    csv += "\r\n";
  };
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (keep[r]) emit(rows[r]);
  }
  for (std::size_t s = 0; s < k; ++s) {
    for (auto [stat, q] : {std::pair{"mean", -1.0}, {"p10", 0.1}, {"p90", 0.9}}) {
      Row row;
      row["row"] = stat;
      row["scheduler"] = a.schedulers[s];
      for (const auto& col : kSummaryColumns) {
        std::vector<double> values;
        for (std::size_t i = 0; i < files.size(); ++i) {
          if (!keep[i * k + s]) continue;
          const auto it = rows[i * k + s].find(col);
          if (it != rows[i * k + s].end() && !it->second.empty()) values.push_back(std::stod(it->second));
        }
        if (values.empty()) continue;
        if (q < 0) {
          double total = 0.0;
          for (double v : values) total += v;
          row[col] = fmt_number(total / static_cast<double>(values.size()));
        } else {
          row[col] = fmt_number(quantile(values, q));
        }
      }
      emit(row);
    }
  }

  if (a.out_path.empty()) {
    out << csv;
  } else {
    write_file(a.out_path, csv);
    out << ordered_json{{"csv", a.out_path}, {"instances", files.size()}, {"failures", failures.load()}}.dump()
        << "\n";
  }
  if (failures > 0) {
    err << failures.load() << " run(s) failed\n";
    return kValidationFailure;
  }
  return exhausted > 0 ? kBudgetExhausted : kOk;
}

struct ExportArgs {
  std::string dataset;
  std::string out_dir;
  SchedulerOptions opt;
};

int cmd_export_training(const ExportArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const auto files = dataset_files(a.dataset);
  fs::create_directories(a.out_dir);
  std::vector<std::string> lines(files.size());
  std::vector<int> counts(files.size(), 0);
  std::vector<std::string> skipped(files.size());

  parallel_for(files.size(), g.workers, [&](std::size_t i) {
    const std::string label = file_stem(files[i]);
    try {
      const auto inst = load_instance(files[i]);
      const SolveResult r = solve_optimal(inst, SolverBudget{a.opt.time_limit, a.opt.max_nodes});
      if (!r.stats.proved_optimal) {
        skipped[i] = label;
        return;
      }
      auto edges = ordered_json::array();
      for (auto [u, v] : inst.edges()) edges.push_back({u.value(), v.value()});
      const auto samples = replay_samples(inst, r.schedule);
      std::string text;
      for (std::size_t j = 0; j < samples.size(); ++j) {
        ordered_json line;
        line["instance"] = label;
        line["slot"] = j + 1;
        line["n"] = inst.node_count();
        line["edges"] = edges;
        auto feats = ordered_json::array();
        for (std::size_t v = 0; v < samples[j].features.rows(); ++v) {
          auto row = ordered_json::array();
          for (float x : samples[j].features.row(v)) row.push_back(static_cast<std::int64_t>(x));
          feats.push_back(std::move(row));
        }
        line["features"] = std::move(feats);
        std::string labels;
        for (Role role : samples[j].labels) labels.push_back(role_symbol(role));
        line["labels"] = labels;
        text += line.dump() + "\n";
      }
      counts[i] = static_cast<int>(samples.size());
      lines[i] = std::move(text);
    } catch (const Error& e) {
      skipped[i] = label + " (" + std::string(to_string(e.code())) + ")";
    }
  });

  std::string all;
  int total = 0;
  auto skipped_list = ordered_json::array();
  for (std::size_t i = 0; i < files.size(); ++i) {
    all += lines[i];
    total += counts[i];
    if (!skipped[i].empty()) skipped_list.push_back(skipped[i]);
  }
  write_file((fs::path(a.out_dir) / "samples.jsonl").string(), all);
  ordered_json manifest;
  manifest["format"] = "gantt-training-v1";
  manifest["feature_spec"] = Hyperparameters{}.feature_spec;
  manifest["instances"] = files.size() - skipped_list.size();
  manifest["samples"] = total;
  manifest["skipped"] = skipped_list;
  write_file((fs::path(a.out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
  if (!skipped_list.empty()) err << "warning: skipped " << skipped_list.size() << " instance(s)\n";
  out << ordered_json{{"samples", total}, {"skipped", skipped_list.size()}}.dump() << "\n";
  return kOk;
}

int cmd_energy(std::int64_t carriers, std::int64_t tags, const Globals& g, std::ostream& out) {
  const double joules = energy_per_tag(carriers, tags);
  if (g.format == "csv") {
    out << "carriers,tags,energy_per_tag_j\r\n" << carriers << ',' << tags << ',' << fmt_number(joules) << "\r\n";
  } else {
    out << ordered_json{{"carriers", carriers}, {"tags", tags}, {"energy_per_tag_j", joules}}.dump() << "\n";
  }
  return kOk;
}

struct BundleArgs {
  std::string out_path;
  Hyperparameters hyper;
  double scale = 1.0;
};

int cmd_random_bundle(BundleArgs a, const Globals& g, std::ostream& out) {
  a.hyper.head_dim = a.hyper.heads > 0 ? a.hyper.hidden_dim / a.hyper.heads : 0;
  save_bundle(random_bundle(a.hyper, g.seed, a.scale), a.out_path);
  out << ordered_json{{"bundle", a.out_path}, {"tensors", tensor_manifest(a.hyper).size()}}.dump() << "\n";
  return kOk;
}

void add_scheduler_options(CLI::App* sub, SchedulerOptions& opt) {
  sub->add_option("--bundle", opt.bundle_path, "GANTT1 weight bundle (gnn)");
  sub->add_option("--time-limit", opt.time_limit, "exact solver wall-clock budget, seconds")->check(CLI::PositiveNumber);
  sub->add_option("--max-nodes", opt.max_nodes, "exact solver search-node budget")->check(CLI::PositiveNumber);
  sub->add_option("--tie-break", opt.tie_break, "greedy tie break")
      ->check(CLI::IsMember({"lowest_node_id", "highest_degree_then_id"}));
  sub->add_option("--max-retries", opt.max_retries, "gnn fail-safe retries per slot")->check(CLI::NonNegativeNumber);
  sub->add_option("--fallback", opt.fallback, "gnn action after exhausted retries")
      ->check(CLI::IsMember({"heuristic", "abort"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Carrier scheduling for backscatter tag networks", "gantt"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "master seed")->capture_default_str();
  app.add_option("--workers", g.workers, "parallel workers")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--format", g.format, "stdout format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate random geometric instances");
  gen_cmd->add_option("--n", gen.n, "node count or range lo..hi")->capture_default_str();
  gen_cmd->add_option("--t", gen.t, "tag count or range lo..hi")->capture_default_str();
  gen_cmd->add_option("--count", gen.count, "instances to write")->capture_default_str();
  gen_cmd->add_option("--density", gen.density)->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--radius", gen.radius)->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--dims", gen.dimensions)->check(CLI::IsMember({2, 3}))->capture_default_str();
  gen_cmd->add_option("--max-attempts", gen.max_attempts)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--out", gen.out_dir, "output directory")->required();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "run one scheduler on one instance");
  solve_cmd->add_option("scheduler", solve.scheduler)->required()->check(CLI::IsMember({"optimal", "greedy", "gnn"}));
  solve_cmd->add_option("instance", solve.instance)->required();
  solve_cmd->add_option("--out", solve.out_path, "write the schedule JSON here");
  solve_cmd->add_option("--stats", solve.stats_path, "write the run record JSON here");
  add_scheduler_options(solve_cmd, solve.opt);

  std::vector<std::string> instance_paths;
  auto* vi_cmd = app.add_subcommand("validate-instance", "check instance files");
  vi_cmd->add_option("instances", instance_paths)->required();

  std::string vs_instance, vs_schedule;
  bool vs_strict = false;
  auto* vs_cmd = app.add_subcommand("validate-schedule", "check a schedule against its instance");
  vs_cmd->add_option("instance", vs_instance)->required();
  vs_cmd->add_option("schedule", vs_schedule)->required();
  vs_cmd->add_flag("--strict", vs_strict, "also flag idle carriers and empty slots");

  CompareArgs compare;
  auto* cmp_cmd = app.add_subcommand("compare", "run schedulers over a dataset and write a CSV table");
  cmp_cmd->add_option("dataset", compare.dataset)->required();
  cmp_cmd->add_option("--schedulers", compare.schedulers)->delimiter(',')->capture_default_str()
      ->check(CLI::IsMember({"optimal", "greedy", "gnn"}));
  cmp_cmd->add_option("--baseline", compare.baseline)->capture_default_str();
  cmp_cmd->add_option("--out", compare.out_path, "CSV path (stdout when omitted)");
  cmp_cmd->add_flag("--keep-invalid", compare.keep_invalid, "emit rows for invalid schedules");
  add_scheduler_options(cmp_cmd, compare.opt);

  ExportArgs exp;
  auto* exp_cmd = app.add_subcommand("export-training", "write per-slot training samples from exact schedules");
  exp_cmd->add_option("dataset", exp.dataset)->required();
  exp_cmd->add_option("--out", exp.out_dir)->required();
  exp_cmd->add_option("--time-limit", exp.opt.time_limit)->check(CLI::PositiveNumber);
  exp_cmd->add_option("--max-nodes", exp.opt.max_nodes)->check(CLI::PositiveNumber);

  std::int64_t carriers = 0, tags = 0;
  auto* energy_cmd = app.add_subcommand("energy", "average energy per tag interrogation");
  energy_cmd->add_option("--carriers", carriers)->required()->check(CLI::NonNegativeNumber);
  energy_cmd->add_option("--tags", tags)->required()->check(CLI::PositiveNumber);

  BundleArgs bundle;
  auto* bundle_cmd = app.add_subcommand("random-bundle", "write a GANTT1 bundle with seeded random weights");
  bundle_cmd->add_option("--out", bundle.out_path)->required();
  bundle_cmd->add_option("--blocks", bundle.hyper.blocks)->check(CLI::PositiveNumber)->capture_default_str();
  bundle_cmd->add_option("--heads", bundle.hyper.heads)->check(CLI::PositiveNumber)->capture_default_str();
  bundle_cmd->add_option("--embed-dim", bundle.hyper.embed_dim)->check(CLI::PositiveNumber)->capture_default_str();
  bundle_cmd->add_option("--hidden-dim", bundle.hyper.hidden_dim)->check(CLI::PositiveNumber)->capture_default_str();
  bundle_cmd->add_option("--scale", bundle.scale)->check(CLI::PositiveNumber)->capture_default_str();

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << e.what() << "\n";
    return kBadArgs;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, g, out);
    if (*solve_cmd) return cmd_solve(solve, g, out, err);
    if (*vi_cmd) return cmd_validate_instance(instance_paths, g, out);
    if (*vs_cmd) return cmd_validate_schedule(vs_instance, vs_schedule, vs_strict, g, out);
    if (*cmp_cmd) return cmd_compare(compare, g, out, err);
    if (*exp_cmd) return cmd_export_training(exp, g, out, err);
    if (*energy_cmd) return cmd_energy(carriers, tags, g, out);
    if (*bundle_cmd) {
      if (bundle.hyper.hidden_dim % bundle.hyper.heads != 0) {
        throw Error(ErrorCode::kBadConfig, "--hidden-dim must be divisible by --heads");
      }
      return cmd_random_bundle(bundle, g, out);
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::kBudgetExhausted: return kBudgetExhausted;
      case ErrorCode::kBadConfig:
      case ErrorCode::kIoError: return kBadArgs;
      default: return kValidationFailure;
    }
  } catch (const fs::filesystem_error& e) {
    err << "IoError: " << e.what() << "\n";
    return kBadArgs;
  }
  return kBadArgs;
}

}  // namespace gantt::cli
