#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "smgan/classifier.hpp"
#include "smgan/dataset.hpp"
#include "smgan/gan.hpp"
#include "smgan/oversample.hpp"
#include "smgan/smote.hpp"

namespace smgan {

struct ExperimentConfig {
  std::string manifest_path;
  std::vector<Method> arms = {Method::None, Method::Smote, Method::Gan, Method::SmotifiedGan};
  std::size_t reps = 30;
  std::uint64_t base_seed = 1;
  std::size_t jobs = 1;
  bool resplit_per_run = false;  // default: one split per dataset, shared by all runs
  SplitSpec split;
  SmoteConfig smote;
  GanConfig gan;
  ClassifierSpec classifier;
  std::string out_dir = "results";
  std::vector<std::string> dataset_filter;  // empty = every manifest entry
};

// Reads the JSON experiment config; the manifest path is resolved relative to
// the config file's directory.
ExperimentConfig load_experiment_config(const std::string& path);

// One (dataset, arm, run) outcome. Failed runs carry the error text and are
// excluded from aggregates.
struct RunRecord {
  std::string dataset;
  std::string arm;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double pr_auc = 0.0;
  std::size_t best_epoch = 0;
  std::string test_hash;  // all runs of a dataset must agree unless resplitting
};

// Metric names in report order.
const std::vector<std::string>& metric_names();
double metric_value(const RunRecord& rec, const std::string& metric);

struct MetricSummary {
  double mean = 0.0;
  double best = 0.0;  // max over runs
  double sd = 0.0;    // population standard deviation
};

struct ArmSummary {
  std::string arm;
  std::size_t runs_ok = 0;
  std::size_t runs_failed = 0;
  std::map<std::string, MetricSummary> metrics;
};

struct DatasetSummary {
  std::string dataset;
  std::vector<ArmSummary> arms;
  std::vector<RunRecord> raw;
};

// Runs arms x reps per dataset. The split is fixed per dataset (seeded by the
// base seed); per-run seeds vary only model initialization and sampling
// streams. Raw per-run records, PR curves and GAN traces are persisted under
// out_dir as each run finishes; summaries and an artifact index are written at
// the end. Deterministic for a fixed config, independent of the job count.
std::vector<DatasetSummary> run_experiment(const ExperimentConfig& cfg);

// Recomputes aggregates from every raw record; the result must equal the
// summaries written by run_experiment.
std::vector<DatasetSummary> aggregate_records(std::vector<RunRecord> records);

// Re-aggregates from the raw files under `raw_dir` (the out_dir of a previous
// run) and rewrites summary tables plus the index into out_dir.
std::vector<DatasetSummary> reaggregate_from_raw(const std::string& raw_dir,
                                                 const std::string& out_dir);

void write_reports(const std::vector<DatasetSummary>& summaries, const std::string& out_dir);

std::size_t total_failures(const std::vector<DatasetSummary>& summaries);

// FNV-1a over the rows of a split; used to assert split constancy.
std::string dataset_fingerprint(const Dataset& ds);

}  // namespace smgan
