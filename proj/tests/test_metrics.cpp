#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "smgan/metrics.hpp"
#include "smgan/rng.hpp"
#include "test_support.hpp"

using namespace smgan;
using namespace test_support;

TEST_CASE("perfect scores give perfect metrics") {
  const std::vector<double> scores = {1.0, 1.0, 0.0, 0.0, 0.0};
  const std::vector<int> labels = {1, 1, 0, 0, 0};
  const MetricsReport rep = metrics_from_scores(scores, labels, 0.5);
  CHECK(rep.precision == 1.0);
  CHECK(rep.recall == 1.0);
  CHECK(rep.f1 == 1.0);
  CHECK(rep.accuracy == 1.0);
  CHECK(rep.pr_auc == doctest::Approx(1.0));
}

TEST_CASE("hand-enumerated confusion matrix") {
  const std::vector<double> scores = {0.9, 0.8, 0.3};
  const std::vector<int> labels = {1, 0, 1};
  const MetricsReport rep = metrics_from_scores(scores, labels, 0.5);
  CHECK(rep.tp == 1);
  CHECK(rep.fp == 1);
  CHECK(rep.fn == 1);
  CHECK(rep.tn == 0);
  CHECK(rep.precision == doctest::Approx(0.5));
  CHECK(rep.recall == doctest::Approx(0.5));
  CHECK(rep.f1 == doctest::Approx(0.5));
}

TEST_CASE("an all-negative scorer has zero precision, recall and F1") {
  std::vector<double> scores(20, 0.0);
  std::vector<int> labels(20, 0);
  labels[3] = labels[11] = 1;
  const MetricsReport rep = metrics_from_scores(scores, labels, 0.5);
  CHECK(rep.tp == 0);
  CHECK(rep.precision == 0.0);
  CHECK(rep.recall == 0.0);
  CHECK(rep.f1 == 0.0);
  CHECK(rep.accuracy == doctest::Approx(18.0 / 20.0));
}

TEST_CASE("single-class test sets are flagged; accuracy still computed") {
  const std::vector<double> scores = {0.9, 0.2, 0.7};
  const MetricsReport pos = metrics_from_scores(scores, {1, 1, 1}, 0.5);
  CHECK(pos.single_class);
  CHECK(pos.pr_curve.empty());
  CHECK(pos.accuracy == doctest::Approx(2.0 / 3.0));
  const MetricsReport neg = metrics_from_scores(scores, {0, 0, 0}, 0.5);
  CHECK(neg.single_class);
  CHECK(neg.accuracy == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("raising the threshold never increases recall") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> scores(12);
    std::vector<int> labels(12);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      scores[i] = rng.uniform01();
      labels[i] = rng.uniform01() < 0.4 ? 1 : 0;
    }
    labels[0] = 1;
    labels[1] = 0;
    double prev_recall = 1.0;
    for (double t = 0.0; t <= 1.0001; t += 0.05) {
      const double r = metrics_from_scores(scores, labels, std::min(t, 1.0)).recall;
      CHECK(r <= prev_recall + 1e-15);
      prev_recall = r;
    }
  }
}

TEST_CASE("pr curve and auc match the brute-force oracle, ties included") {
  Rng rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(19);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    bool seen[2] = {false, false};
    for (std::size_t i = 0; i < n; ++i) {
      // quantized scores force plenty of ties
      scores[i] = std::round(rng.uniform01() * 4.0) / 4.0;
      labels[i] = rng.uniform01() < 0.5 ? 1 : 0;
      seen[labels[i]] = true;
    }
    if (!(seen[0] && seen[1])) {
      labels[0] = 0;
      labels[n - 1] = 1;
    }
    const MetricsReport rep = metrics_from_scores(scores, labels, 0.5);
    const BrutePr oracle = brute_pr(scores, labels);
    REQUIRE(rep.pr_curve.size() == oracle.curve.size());
    for (std::size_t i = 0; i < oracle.curve.size(); ++i)
      for (int k = 0; k < 3; ++k)
        CHECK(std::abs(rep.pr_curve[i][k] - oracle.curve[i][k]) < 1e-12);
    CHECK(std::abs(rep.pr_auc - oracle.auc) < 1e-12);
  }
}

TEST_CASE("all label patterns over six-row test sets match brute enumeration") {
  const std::vector<std::vector<double>> score_sets = {
      {0.9, 0.8, 0.7, 0.6, 0.5, 0.4},
      {0.5, 0.5, 0.5, 0.5, 0.5, 0.5},
      {0.1, 0.9, 0.1, 0.9, 0.1, 0.9},
      {0.25, 0.5, 0.25, 0.75, 0.5, 0.0},
  };
  for (const auto& scores : score_sets) {
    for (unsigned mask = 0; mask < 64; ++mask) {
      std::vector<int> labels(6);
      std::size_t positives = 0;
      for (int b = 0; b < 6; ++b) {
        labels[b] = (mask >> b) & 1u;
        positives += labels[b];
      }
      const MetricsReport rep = metrics_from_scores(scores, labels, 0.5);

      // confusion counts by direct loop
      std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
      for (int i = 0; i < 6; ++i) {
        const bool pred = scores[i] >= 0.5;
        if (pred && labels[i]) ++tp;
        else if (pred) ++fp;
        else if (labels[i]) ++fn;
        else ++tn;
      }
      CHECK(rep.tp == tp);
      CHECK(rep.fp == fp);
      CHECK(rep.tn == tn);
      CHECK(rep.fn == fn);
      const double p = tp + fp ? double(tp) / double(tp + fp) : 0.0;
      const double r = tp + fn ? double(tp) / double(tp + fn) : 0.0;
      const double f1 = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
      CHECK(std::abs(rep.precision - p) < 1e-12);
      CHECK(std::abs(rep.recall - r) < 1e-12);
      CHECK(std::abs(rep.f1 - f1) < 1e-12);

      if (positives == 0 || positives == 6) {
        CHECK(rep.single_class);
      } else {
        CHECK(std::abs(rep.pr_auc - brute_pr(scores, labels).auc) < 1e-12);
      }
    }
  }
}

TEST_CASE("metrics are invariant to test row order") {
  Rng rng(8);
  std::vector<double> scores(15);
  std::vector<int> labels(15);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = rng.uniform01();
    labels[i] = i % 3 == 0 ? 1 : 0;
  }
  const MetricsReport base = metrics_from_scores(scores, labels, 0.5);
  std::vector<std::size_t> perm(15);
  for (std::size_t i = 0; i < 15; ++i) perm[i] = i;
  for (int trial = 0; trial < 5; ++trial) {
    rng.shuffle(perm);
    std::vector<double> s2(15);
    std::vector<int> l2(15);
    for (std::size_t i = 0; i < 15; ++i) {
      s2[i] = scores[perm[i]];
      l2[i] = labels[perm[i]];
    }
    const MetricsReport rep = metrics_from_scores(s2, l2, 0.5);
    CHECK(rep.tp == base.tp);
    CHECK(rep.f1 == doctest::Approx(base.f1).epsilon(1e-15));
    CHECK(rep.pr_auc == doctest::Approx(base.pr_auc).epsilon(1e-15));
  }
}

TEST_CASE("f1 is the harmonic mean of precision and recall") {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> scores(10);
    std::vector<int> labels(10);
    for (std::size_t i = 0; i < 10; ++i) {
      scores[i] = rng.uniform01();
      labels[i] = rng.uniform01() < 0.5 ? 1 : 0;
    }
    const MetricsReport rep = metrics_from_scores(scores, labels, 0.5);
    if (rep.precision + rep.recall > 0)
      CHECK(std::abs(rep.f1 - 2 * rep.precision * rep.recall / (rep.precision + rep.recall)) <
            1e-12);
  }
}

TEST_CASE("empty and mismatched inputs are rejected") {
  CHECK_THROWS_AS(metrics_from_scores({}, {}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(metrics_from_scores({0.5}, {1, 0}, 0.5), std::invalid_argument);
}
