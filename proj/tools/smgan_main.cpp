// Experiment CLI: `run` executes the oversampling comparison, `oversample`
// emits synthetic rows for one dataset/arm, `report` re-aggregates a previous
// run's raw records.

#include <algorithm>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "smgan/dataset.hpp"
#include "smgan/harness.hpp"
#include "smgan/io.hpp"
#include "smgan/metrics.hpp"
#include "smgan/oversample.hpp"

using namespace smgan;

namespace {

int cmd_run(const std::string& config_path, const std::vector<std::string>& datasets,
            const std::vector<std::string>& arms, int reps, long long seed,
            const std::string& out, int jobs, bool resplit) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  if (!datasets.empty()) cfg.dataset_filter = datasets;
  if (!arms.empty()) {
    cfg.arms.clear();
    for (const std::string& a : arms) cfg.arms.push_back(method_from_string(a));
  }
  if (reps > 0) cfg.reps = static_cast<std::size_t>(reps);
  if (seed >= 0) cfg.base_seed = static_cast<std::uint64_t>(seed);
  if (!out.empty()) cfg.out_dir = out;
  if (jobs > 0) cfg.jobs = static_cast<std::size_t>(jobs);
  if (resplit) cfg.resplit_per_run = true;

  const std::vector<DatasetSummary> summaries = run_experiment(cfg);
  for (const DatasetSummary& ds : summaries) {
    std::cout << "== " << ds.dataset << " ==\n";
    for (const ArmSummary& arm : ds.arms) {
      const MetricSummary& f1 = arm.metrics.at("f1");
      std::cout << "  " << method_display_name(method_from_string(arm.arm)) << ": F1 mean "
                << f1.mean << " (best " << f1.best << ", sd " << f1.sd << ")";
      if (arm.runs_failed > 0) std::cout << "  [" << arm.runs_failed << " failed run(s) excluded]";
      std::cout << "\n";
    }
  }
  const std::size_t failed = total_failures(summaries);
  if (failed > 0) {
    std::cerr << failed << " run(s) failed; see the raw records under " << cfg.out_dir
              << "/raw\n";
    return 1;
  }
  std::cout << "reports written to " << cfg.out_dir << "\n";
  return 0;
}

int cmd_oversample(const std::string& config_path, const std::string& dataset,
                   const std::string& arm, long long seed, const std::string& out,
                   const std::string& compare, bool keep_scaled) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  if (seed >= 0) cfg.base_seed = static_cast<std::uint64_t>(seed);

  const std::vector<CsvSpec> specs = load_manifest(cfg.manifest_path);
  const auto it = std::find_if(specs.begin(), specs.end(),
                               [&](const CsvSpec& s) { return s.name == dataset; });
  if (it == specs.end()) {
    std::cerr << "dataset '" << dataset << "' not present in manifest\n";
    return 1;
  }
  const Method method = method_from_string(arm);
  if (method == Method::None) {
    std::cerr << "the none arm produces no synthetic rows\n";
    return 1;
  }

  const Dataset raw = load_csv(*it);
  SplitSpec split = cfg.split;
  split.seed = cfg.base_seed;
  const Splits splits = stratified_split(raw, split);
  const ScaleParams scale = fit_scale(splits.train);
  const Dataset train = apply_scale(splits.train, scale);

  SmoteConfig sc = cfg.smote;
  sc.seed = derive_seed(cfg.base_seed, 11);
  GanConfig gc = cfg.gan;
  gc.seed = derive_seed(cfg.base_seed, 12);

  const OversampleResult res = baseline_oversample(train, method, sc, gc);
  const Matrix samples = keep_scaled ? res.synthetic : unscale(res.synthetic, scale);
  write_matrix_csv(samples, out);
  std::cout << "wrote " << samples.rows << " synthetic rows to " << out << "\n";

  if (!compare.empty()) {
    if (method != Method::SmotifiedGan) {
      std::cerr << "--compare needs the smotified_gan arm\n";
      return 1;
    }
    const Matrix pre = keep_scaled ? res.repertoire : unscale(res.repertoire, scale);
    const Matrix post = keep_scaled ? res.synthetic : unscale(res.synthetic, scale);
    write_pre_post_csv(pre, post, compare);
    std::cout << "wrote pre/post comparison to " << compare << "\n";
  }
  return 0;
}

int cmd_report(const std::string& in_dir, const std::string& out_dir) {
  const std::string out = out_dir.empty() ? in_dir : out_dir;
  const std::vector<DatasetSummary> summaries = reaggregate_from_raw(in_dir, out);
  std::cout << "re-aggregated " << summaries.size() << " dataset(s) into " << out << "\n";
  return total_failures(summaries) > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oversampling benchmark: SMOTE, GAN and SMOTified-GAN against a fixed classifier"};
  app.require_subcommand(1);

  std::string config_path, out, compare, dataset, arm = "smotified_gan", in_dir, report_out;
  std::vector<std::string> datasets, arms;
  int reps = -1, jobs = -1;
  long long seed = -1;
  bool resplit = false, keep_scaled = false;

  CLI::App* run = app.add_subcommand("run", "Run arms x repetitions over the manifest datasets");
  run->add_option("--config", config_path, "Experiment config JSON")->required();
  run->add_option("--datasets", datasets, "Subset of manifest datasets")->delimiter(',');
  run->add_option("--arms", arms, "Subset of {none,smote,gan,smotified_gan}")->delimiter(',');
  run->add_option("--reps", reps, "Repetitions per arm");
  run->add_option("--seed", seed, "Base seed");
  run->add_option("--out", out, "Output directory");
  run->add_option("--jobs", jobs, "Concurrent runs");
  run->add_flag("--resplit", resplit, "Re-split per run instead of a fixed split");

  CLI::App* over = app.add_subcommand("oversample", "Emit synthetic rows for one dataset");
  over->add_option("--config", config_path, "Experiment config JSON")->required();
  over->add_option("--dataset", dataset, "Dataset name from the manifest")->required();
  over->add_option("--arm", arm, "One of {smote,gan,smotified_gan}");
  over->add_option("--seed", seed, "Base seed");
  over->add_option("--out", out, "Output CSV path")->required();
  over->add_option("--compare", compare, "Also write a SMOTE-vs-generator CSV (smotified_gan)");
  over->add_flag("--scaled", keep_scaled, "Keep samples in scaled [0,1] space");

  CLI::App* rep = app.add_subcommand("report", "Re-aggregate summaries from raw run records");
  rep->add_option("--in", in_dir, "Directory written by a previous run")->required();
  rep->add_option("--out", report_out, "Where to write the summaries (default: --in)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, datasets, arms, reps, seed, out, jobs, resplit);
    if (over->parsed()) return cmd_oversample(config_path, dataset, arm, seed, out, compare, keep_scaled);
    if (rep->parsed()) return cmd_report(in_dir, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
