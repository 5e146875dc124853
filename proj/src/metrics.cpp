#include "smgan/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace smgan {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricsReport metrics_from_scores(const std::vector<double>& scores,
                                  const std::vector<int>& labels, double threshold) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("metrics: scores and labels differ in length");
  if (scores.empty()) throw std::invalid_argument("metrics: empty test set");

  MetricsReport rep;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool pred = scores[i] >= threshold;
    const bool truth = labels[i] == 1;
    positives += truth ? 1u : 0u;
    if (pred && truth)
      ++rep.tp;
    else if (pred && !truth)
      ++rep.fp;
    else if (!pred && truth)
      ++rep.fn;
    else
      ++rep.tn;
  }
  rep.accuracy = ratio(rep.tp + rep.tn, scores.size());
  rep.precision = ratio(rep.tp, rep.tp + rep.fp);
  rep.recall = ratio(rep.tp, rep.tp + rep.fn);
  const double pr = rep.precision + rep.recall;
  rep.f1 = pr > 0.0 ? 2.0 * rep.precision * rep.recall / pr : 0.0;

  rep.single_class = positives == 0 || positives == scores.size();
  if (rep.single_class) return rep;

  // Sweep thresholds over the distinct scores, highest first, so recall grows
  // along the curve.
  std::vector<std::size_t> by_score(scores.size());
  for (std::size_t i = 0; i < by_score.size(); ++i) by_score[i] = i;
  std::sort(by_score.begin(), by_score.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < by_score.size()) {
    const double cut = scores[by_score[i]];
    while (i < by_score.size() && scores[by_score[i]] == cut) {
      if (labels[by_score[i]] == 1)
        ++tp;
      else
        ++fp;
      ++i;
    }
    const double p = ratio(tp, tp + fp);
    const double r = ratio(tp, positives);
    rep.pr_curve.push_back({cut, p, r});
  }

  double auc = 0.0;
  double prev_r = 0.0, prev_p = rep.pr_curve.front()[1];
  for (const auto& pt : rep.pr_curve) {
    auc += (pt[2] - prev_r) * (pt[1] + prev_p) / 2.0;
    prev_r = pt[2];
    prev_p = pt[1];
  }
  rep.pr_auc = auc;
  return rep;
}

std::vector<double> predict_scores(const MlpModel& model, const Matrix& features) {
  const Matrix out = predict(model, features);
  std::vector<double> scores(out.rows);
  for (std::size_t i = 0; i < out.rows; ++i) scores[i] = out(i, 0);
  return scores;
}

MetricsReport evaluate(const MlpModel& model, const Dataset& test, double threshold) {
  if (test.size() == 0) throw std::invalid_argument("evaluate: empty test set");
  return metrics_from_scores(predict_scores(model, test.features), test.labels, threshold);
}

void write_pr_csv(const MetricsReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "threshold,precision,recall\n";
  char buf[96];
  for (const auto& pt : report.pr_curve) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", pt[0], pt[1], pt[2]);
    out << buf;
  }
}

}  // namespace smgan
