#pragma once

#include <array>
#include <string>
#include <vector>

#include "smgan/dataset.hpp"
#include "smgan/mlp.hpp"

namespace smgan {

// Confusion counts and derived metrics for one model on one test set, with
// the minority class (label 1) as positive. Zero-denominator metrics resolve
// to 0. When the test set holds a single class only accuracy is meaningful
// and `single_class` is set; the PR curve is left empty.
struct MetricsReport {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool single_class = false;
  std::vector<std::array<double, 3>> pr_curve;  // threshold, precision, recall
  double pr_auc = 0.0;
};

// Point metrics at `threshold` (score >= threshold predicts positive) plus a
// PR curve swept over every distinct score. PR-AUC integrates precision over
// recall by the trapezoidal rule, after prepending a (recall 0, first
// precision) endpoint.
MetricsReport metrics_from_scores(const std::vector<double>& scores,
                                  const std::vector<int>& labels, double threshold);

// Scores the test set with the model's first output column.
MetricsReport evaluate(const MlpModel& model, const Dataset& test, double threshold);

std::vector<double> predict_scores(const MlpModel& model, const Matrix& features);

void write_pr_csv(const MetricsReport& report, const std::string& path);

}  // namespace smgan
