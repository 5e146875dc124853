#include "smgan/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "smgan/metrics.hpp"
#include "smgan/rng.hpp"

namespace fs = std::filesystem;

namespace smgan {

namespace {

std::vector<std::size_t> json_widths(const nlohmann::json& j) {
  return j.get<std::vector<std::size_t>>();
}

ClassifierSpec::OutputHead head_from_string(const std::string& s) {
  if (s == "sigmoid") return ClassifierSpec::OutputHead::Sigmoid;
  if (s == "relu") return ClassifierSpec::OutputHead::Relu;
  if (s == "linear") return ClassifierSpec::OutputHead::Linear;
  throw std::invalid_argument("unknown classifier head '" + s + "'");
}

std::string format4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string format_cell(const MetricSummary& m) {
  return format4(m.mean) + " (" + format4(m.best) + "," + format4(m.sd) + ")";
}

std::string format_raw(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {"train_accuracy", "test_accuracy", "f1",
                                                 "precision",      "recall",        "pr_auc"};
  return names;
}

double metric_value(const RunRecord& rec, const std::string& metric) {
  if (metric == "train_accuracy") return rec.train_accuracy;
  if (metric == "test_accuracy") return rec.test_accuracy;
  if (metric == "f1") return rec.f1;
  if (metric == "precision") return rec.precision;
  if (metric == "recall") return rec.recall;
  if (metric == "pr_auc") return rec.pr_auc;
  throw std::invalid_argument("unknown metric '" + metric + "'");
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  nlohmann::json j;
  in >> j;

  ExperimentConfig cfg;
  const fs::path base = fs::path(path).parent_path();
  cfg.manifest_path = (base / j.at("manifest").get<std::string>()).string();
  if (j.contains("arms")) {
    cfg.arms.clear();
    for (const auto& a : j.at("arms")) cfg.arms.push_back(method_from_string(a.get<std::string>()));
  }
  cfg.reps = j.value("reps", cfg.reps);
  cfg.base_seed = j.value("seed", cfg.base_seed);
  cfg.jobs = j.value("jobs", cfg.jobs);
  cfg.resplit_per_run = j.value("resplit_per_run", cfg.resplit_per_run);
  cfg.out_dir = j.value("out", cfg.out_dir);
  if (j.contains("datasets")) cfg.dataset_filter = j.at("datasets").get<std::vector<std::string>>();

  if (j.contains("split")) {
    const auto& s = j.at("split");
    cfg.split.train_fraction = s.value("train", cfg.split.train_fraction);
    cfg.split.val_fraction = s.value("val", cfg.split.val_fraction);
    cfg.split.test_fraction = s.value("test", cfg.split.test_fraction);
  }
  if (j.contains("smote")) {
    const auto& s = j.at("smote");
    cfg.smote.k = s.value("k", cfg.smote.k);
  }
  if (j.contains("gan")) {
    const auto& g = j.at("gan");
    if (g.contains("gen_hidden")) cfg.gan.gen_hidden = json_widths(g.at("gen_hidden"));
    if (g.contains("disc_hidden")) cfg.gan.disc_hidden = json_widths(g.at("disc_hidden"));
    cfg.gan.learning_rate = g.value("learning_rate", cfg.gan.learning_rate);
    cfg.gan.batch_size = g.value("batch_size", cfg.gan.batch_size);
    cfg.gan.max_epochs = g.value("max_epochs", cfg.gan.max_epochs);
    cfg.gan.disc_steps = g.value("disc_steps", cfg.gan.disc_steps);
    cfg.gan.leaky_alpha = g.value("leaky_alpha", cfg.gan.leaky_alpha);
    cfg.gan.patience = g.value("patience", cfg.gan.patience);
    cfg.gan.near_zero_eps = g.value("near_zero_eps", cfg.gan.near_zero_eps);
    cfg.gan.near_zero_patience = g.value("near_zero_patience", cfg.gan.near_zero_patience);
  }
  if (j.contains("classifier")) {
    const auto& c = j.at("classifier");
    if (c.contains("hidden")) cfg.classifier.hidden = json_widths(c.at("hidden"));
    if (c.contains("head")) cfg.classifier.head = head_from_string(c.at("head").get<std::string>());
    cfg.classifier.learning_rate = c.value("learning_rate", cfg.classifier.learning_rate);
    cfg.classifier.batch_size = c.value("batch_size", cfg.classifier.batch_size);
    cfg.classifier.max_epochs = c.value("max_epochs", cfg.classifier.max_epochs);
    cfg.classifier.patience = c.value("patience", cfg.classifier.patience);
    cfg.classifier.threshold = c.value("threshold", cfg.classifier.threshold);
  }
  return cfg;
}

std::string dataset_fingerprint(const Dataset& ds) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](const void* p, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ull;
    }
  };
  for (std::size_t i = 0; i < ds.size(); ++i) {
    mix(ds.features.row(i), ds.d() * sizeof(double));
    mix(&ds.labels[i], sizeof(int));
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

struct PreparedDataset {
  std::string name;
  Dataset raw;
};

struct RunArtifacts {
  RunRecord rec;
  std::string pr_path;
  std::string trace_path;
};

nlohmann::json record_to_json(const RunRecord& r) {
  nlohmann::json j;
  j["dataset"] = r.dataset;
  j["arm"] = r.arm;
  j["run"] = r.run;
  j["seed"] = r.seed;
  j["ok"] = r.ok;
  j["error"] = r.error;
  j["test_hash"] = r.test_hash;
  j["best_epoch"] = r.best_epoch;
  nlohmann::json m;
  for (const std::string& name : metric_names()) m[name] = metric_value(r, name);
  j["metrics"] = m;
  return j;
}

RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  r.dataset = j.at("dataset").get<std::string>();
  r.arm = j.at("arm").get<std::string>();
  r.run = j.at("run").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.ok = j.at("ok").get<bool>();
  r.error = j.value("error", "");
  r.test_hash = j.value("test_hash", "");
  r.best_epoch = j.value("best_epoch", std::size_t{0});
  const auto& m = j.at("metrics");
  r.train_accuracy = m.value("train_accuracy", 0.0);
  r.test_accuracy = m.value("test_accuracy", 0.0);
  r.f1 = m.value("f1", 0.0);
  r.precision = m.value("precision", 0.0);
  r.recall = m.value("recall", 0.0);
  r.pr_auc = m.value("pr_auc", 0.0);
  return r;
}

// One (dataset, arm, run) job. Splits are precomputed and shared; only the
// model/sampling streams depend on the run seed.
RunRecord execute_run(const ExperimentConfig& cfg, const PreparedDataset& prep,
                      const Splits& shared_splits, Method method, std::size_t run,
                      RunArtifacts& artifacts) {
  RunRecord rec;
  rec.dataset = prep.name;
  rec.arm = method_to_string(method);
  rec.run = run;
  rec.seed = cfg.base_seed + run;

  const Splits* splits = &shared_splits;
  Splits local;
  if (cfg.resplit_per_run) {
    SplitSpec spec = cfg.split;
    spec.seed = rec.seed;
    local = stratified_split(prep.raw, spec);
    splits = &local;
  }
  const ScaleParams scale = fit_scale(splits->train);
  const Dataset train = apply_scale(splits->train, scale);
  const Dataset val = apply_scale(splits->val, scale);
  const Dataset test = apply_scale(splits->test, scale);
  rec.test_hash = dataset_fingerprint(test);

  SmoteConfig sc = cfg.smote;
  sc.seed = derive_seed(rec.seed, 11);
  GanConfig gc = cfg.gan;
  gc.seed = derive_seed(rec.seed, 12);
  ClassifierSpec cs = cfg.classifier;
  cs.seed = derive_seed(rec.seed, 13);

  const OversampleResult over = baseline_oversample(train, method, sc, gc);
  const ClassifierResult cls = train_classifier(over.augmented, val, cs);
  const MetricsReport on_test = evaluate(cls.model, test, cs.threshold);
  const MetricsReport on_train = evaluate(cls.model, over.augmented, cs.threshold);

  rec.ok = true;
  rec.train_accuracy = on_train.accuracy;
  rec.test_accuracy = on_test.accuracy;
  rec.f1 = on_test.f1;
  rec.precision = on_test.precision;
  rec.recall = on_test.recall;
  rec.pr_auc = on_test.pr_auc;
  rec.best_epoch = cls.best_epoch;

  if (!artifacts.pr_path.empty()) write_pr_csv(on_test, artifacts.pr_path);
  if (over.has_trace && !artifacts.trace_path.empty()) write_trace_csv(over.trace, artifacts.trace_path);
  return rec;
}

void write_raw_record(const RunRecord& rec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << record_to_json(rec).dump(2) << "\n";
}

MetricSummary summarize_metric(const std::vector<const RunRecord*>& ok_runs,
                               const std::string& metric) {
  MetricSummary s;
  if (ok_runs.empty()) return s;
  double sum = 0.0;
  double best = metric_value(*ok_runs.front(), metric);
  for (const RunRecord* r : ok_runs) {
    const double v = metric_value(*r, metric);
    sum += v;
    best = std::max(best, v);
  }
  s.mean = sum / static_cast<double>(ok_runs.size());
  s.best = best;
  double var = 0.0;
  for (const RunRecord* r : ok_runs) {
    const double d = metric_value(*r, metric) - s.mean;
    var += d * d;
  }
  s.sd = std::sqrt(var / static_cast<double>(ok_runs.size()));
  if (s.sd < 0.0 || s.best + 1e-12 < s.mean - 5.0 * s.sd)
    throw std::logic_error("aggregate sanity check failed for metric '" + metric + "'");
  return s;
}

void check_split_constancy(const std::vector<RunRecord>& records, bool resplit) {
  if (resplit) return;
  std::map<std::string, std::string> hashes;
  for (const RunRecord& r : records) {
    if (!r.ok || r.test_hash.empty()) continue;
    auto [it, inserted] = hashes.emplace(r.dataset, r.test_hash);
    if (!inserted && it->second != r.test_hash)
      throw std::logic_error("test split changed between runs of '" + r.dataset + "'");
  }
}

}  // namespace

std::vector<DatasetSummary> aggregate_records(std::vector<RunRecord> records) {
  std::stable_sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    if (a.dataset != b.dataset) return a.dataset < b.dataset;
    if (a.arm != b.arm) return a.arm < b.arm;
    return a.run < b.run;
  });

  std::vector<DatasetSummary> out;
  for (const RunRecord& rec : records) {
    if (out.empty() || out.back().dataset != rec.dataset) {
      out.emplace_back();
      out.back().dataset = rec.dataset;
    }
    out.back().raw.push_back(rec);
  }

  const std::vector<std::string> arm_order = {"none", "smote", "gan", "smotified_gan"};
  for (DatasetSummary& ds : out) {
    std::set<std::string> arms_present;
    for (const RunRecord& r : ds.raw) arms_present.insert(r.arm);
    for (const std::string& arm : arm_order) {
      if (!arms_present.count(arm)) continue;
      ArmSummary as;
      as.arm = arm;
      std::vector<const RunRecord*> ok_runs;
      for (const RunRecord& r : ds.raw) {
        if (r.arm != arm) continue;
        if (r.ok)
          ok_runs.push_back(&r);
        else
          ++as.runs_failed;
      }
      as.runs_ok = ok_runs.size();
      for (const std::string& metric : metric_names())
        as.metrics[metric] = summarize_metric(ok_runs, metric);
      ds.arms.push_back(std::move(as));
    }
  }
  return out;
}

void write_reports(const std::vector<DatasetSummary>& summaries, const std::string& out_dir) {
  if (summaries.empty()) throw std::invalid_argument("write_reports: nothing to report");
  fs::create_directories(out_dir);

  nlohmann::json index;
  index["datasets"] = nlohmann::json::array();
  std::size_t failures = 0;

  for (const DatasetSummary& ds : summaries) {
    const std::string csv_path = out_dir + "/" + ds.dataset + "_summary.csv";
    const std::string txt_path = out_dir + "/" + ds.dataset + "_summary.txt";

    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write '" + csv_path + "'");
    csv << "arm,metric,mean,best,sd,runs_ok,runs_failed\n";
    for (const ArmSummary& arm : ds.arms)
      for (const std::string& metric : metric_names()) {
        const MetricSummary& m = arm.metrics.at(metric);
        csv << arm.arm << "," << metric << "," << format_raw(m.mean) << "," << format_raw(m.best)
            << "," << format_raw(m.sd) << "," << arm.runs_ok << "," << arm.runs_failed << "\n";
      }

    std::ofstream txt(txt_path);
    if (!txt) throw std::runtime_error("cannot write '" + txt_path + "'");
    txt << "Dataset: " << ds.dataset << "\n";
    char line[512];
    std::snprintf(line, sizeof(line), "%-17s %-24s %-24s %-24s %-24s %-24s %-24s\n", "Method",
                  "Train Mean (Best,SD)", "Test Mean (Best,SD)", "F1 Mean (Best,SD)",
                  "Precision", "Recall", "PR-AUC");
    txt << line;
    for (const ArmSummary& arm : ds.arms) {
      const std::string name = method_display_name(method_from_string(arm.arm));
      std::snprintf(line, sizeof(line), "%-17s %-24s %-24s %-24s %-24s %-24s %-24s\n",
                    name.c_str(), format_cell(arm.metrics.at("train_accuracy")).c_str(),
                    format_cell(arm.metrics.at("test_accuracy")).c_str(),
                    format_cell(arm.metrics.at("f1")).c_str(),
                    format_cell(arm.metrics.at("precision")).c_str(),
                    format_cell(arm.metrics.at("recall")).c_str(),
                    format_cell(arm.metrics.at("pr_auc")).c_str());
      txt << line;
      failures += arm.runs_failed;
    }
    if (std::any_of(ds.arms.begin(), ds.arms.end(),
                    [](const ArmSummary& a) { return a.runs_failed > 0; })) {
      txt << "warning: failed runs excluded from aggregates:";
      for (const ArmSummary& a : ds.arms)
        if (a.runs_failed > 0) txt << " " << a.arm << "=" << a.runs_failed;
      txt << "\n";
    }

    nlohmann::json dj;
    dj["name"] = ds.dataset;
    dj["summary_csv"] = csv_path;
    dj["summary_txt"] = txt_path;
    dj["arms"] = nlohmann::json::array();
    for (const ArmSummary& arm : ds.arms) {
      nlohmann::json aj;
      aj["name"] = arm.arm;
      aj["runs_ok"] = arm.runs_ok;
      aj["runs_failed"] = arm.runs_failed;
      nlohmann::json raw = nlohmann::json::array();
      nlohmann::json pr = nlohmann::json::array();
      nlohmann::json trace = nlohmann::json::array();
      for (const RunRecord& r : ds.raw) {
        if (r.arm != arm.arm) continue;
        const std::string stem = ds.dataset + "__" + arm.arm + "__run" + std::to_string(r.run);
        raw.push_back(out_dir + "/raw/" + stem + ".json");
        if (r.ok) {
          pr.push_back(out_dir + "/pr/" + stem + ".csv");
          if (arm.arm == "gan" || arm.arm == "smotified_gan")
            trace.push_back(out_dir + "/traces/" + stem + ".csv");
        }
      }
      aj["raw"] = raw;
      aj["pr"] = pr;
      aj["traces"] = trace;
      dj["arms"].push_back(aj);
    }
    index["datasets"].push_back(dj);
  }
  index["failures"] = failures;

  std::ofstream idx(out_dir + "/index.json");
  if (!idx) throw std::runtime_error("cannot write index.json");
  idx << index.dump(2) << "\n";
}

std::vector<DatasetSummary> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.arms.empty()) throw std::invalid_argument("run_experiment: no arms requested");
  if (cfg.reps < 1) throw std::invalid_argument("run_experiment: reps must be >= 1");

  std::vector<CsvSpec> specs = load_manifest(cfg.manifest_path);
  if (!cfg.dataset_filter.empty()) {
    std::vector<CsvSpec> filtered;
    for (const std::string& want : cfg.dataset_filter) {
      const auto it = std::find_if(specs.begin(), specs.end(),
                                   [&](const CsvSpec& s) { return s.name == want; });
      if (it == specs.end())
        throw std::invalid_argument("dataset '" + want + "' not present in manifest");
      filtered.push_back(*it);
    }
    specs = std::move(filtered);
  }

  fs::create_directories(cfg.out_dir);
  fs::create_directories(cfg.out_dir + "/raw");
  fs::create_directories(cfg.out_dir + "/pr");
  fs::create_directories(cfg.out_dir + "/traces");

  std::vector<PreparedDataset> prepared;
  std::vector<Splits> shared_splits;
  for (const CsvSpec& spec : specs) {
    PreparedDataset p;
    p.raw = load_csv(spec);
    p.name = spec.name;
    SplitSpec split = cfg.split;
    split.seed = cfg.base_seed;
    shared_splits.push_back(stratified_split(p.raw, split));
    prepared.push_back(std::move(p));
  }

  struct Job {
    std::size_t ds = 0;
    Method method = Method::None;
    std::size_t run = 0;
  };
  std::vector<Job> jobs;
  for (std::size_t d = 0; d < prepared.size(); ++d)
    for (Method m : cfg.arms)
      for (std::size_t r = 0; r < cfg.reps; ++r) jobs.push_back({d, m, r});

  std::vector<RunRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      const PreparedDataset& prep = prepared[job.ds];
      const std::string stem = prep.name + "__" + method_to_string(job.method) + "__run" +
                               std::to_string(job.run);
      RunArtifacts artifacts;
      artifacts.pr_path = cfg.out_dir + "/pr/" + stem + ".csv";
      artifacts.trace_path = cfg.out_dir + "/traces/" + stem + ".csv";
      RunRecord rec;
      try {
        rec = execute_run(cfg, prep, shared_splits[job.ds], job.method, job.run, artifacts);
      } catch (const std::exception& e) {
        rec = RunRecord{};
        rec.dataset = prep.name;
        rec.arm = method_to_string(job.method);
        rec.run = job.run;
        rec.seed = cfg.base_seed + job.run;
        rec.ok = false;
        rec.error = e.what();
      }
      write_raw_record(rec, cfg.out_dir + "/raw/" + stem + ".json");
      records[i] = std::move(rec);
    }
  };

  const std::size_t n_threads = std::max<std::size_t>(1, std::min(cfg.jobs, jobs.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  check_split_constancy(records, cfg.resplit_per_run);

  // Keep manifest order in the report: aggregate per dataset, then reorder.
  std::vector<DatasetSummary> summaries = aggregate_records(records);
  std::vector<DatasetSummary> ordered;
  for (const PreparedDataset& p : prepared) {
    const auto it = std::find_if(summaries.begin(), summaries.end(),
                                 [&](const DatasetSummary& s) { return s.dataset == p.name; });
    if (it != summaries.end()) ordered.push_back(std::move(*it));
  }
  write_reports(ordered, cfg.out_dir);
  return ordered;
}

std::vector<DatasetSummary> reaggregate_from_raw(const std::string& raw_dir,
                                                 const std::string& out_dir) {
  const fs::path raw = fs::path(raw_dir) / "raw";
  if (!fs::is_directory(raw))
    throw std::runtime_error("'" + raw_dir + "' has no raw/ directory to aggregate");
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(raw))
    if (entry.path().extension() == ".json") files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no raw run records under '" + raw.string() + "'");

  std::vector<RunRecord> records;
  for (const std::string& f : files) {
    std::ifstream in(f);
    nlohmann::json j;
    in >> j;
    records.push_back(record_from_json(j));
  }
  std::vector<DatasetSummary> summaries = aggregate_records(std::move(records));
  write_reports(summaries, out_dir);
  return summaries;
}

std::size_t total_failures(const std::vector<DatasetSummary>& summaries) {
  std::size_t n = 0;
  for (const DatasetSummary& ds : summaries)
    for (const ArmSummary& arm : ds.arms) n += arm.runs_failed;
  return n;
}

}  // namespace smgan
