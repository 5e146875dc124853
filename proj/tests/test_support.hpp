#pragma once

// Shared helpers and independent oracles for the test suites. Everything here
// recomputes results by brute force, separately from the library's own code
// paths.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "smgan/matrix.hpp"
#include "smgan/mlp.hpp"
#include "smgan/rng.hpp"

namespace test_support {

inline smgan::Matrix random_matrix(std::size_t rows, std::size_t cols, smgan::Rng& rng,
                                   double lo = -1.0, double hi = 1.0) {
  smgan::Matrix m(rows, cols);
  for (double& v : m.data) v = lo + (hi - lo) * rng.uniform01();
  return m;
}

// Exhaustive all-pairs nearest neighbors: sort every other row by squared
// distance, ties by row index.
inline std::vector<std::size_t> brute_knn(std::size_t query, const smgan::Matrix& x,
                                          std::size_t k) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t i = 0; i < x.rows; ++i) {
    if (i == query) continue;
    double d2 = 0.0;
    for (std::size_t j = 0; j < x.cols; ++j) {
      const double diff = x(i, j) - x(query, j);
      d2 += diff * diff;
    }
    all.emplace_back(d2, i);
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& a, const auto& b) {
                     if (a.first != b.first) return a.first < b.first;
                     return a.second < b.second;
                   });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < std::min(k, all.size()); ++i) out.push_back(all[i].second);
  return out;
}

// Softplus evaluated in long double, for loss oracles.
inline double softplus_oracle(double x) {
  const long double lx = x;
  if (lx > 0)
    return static_cast<double>(lx + std::log1p(std::exp(-lx)));
  return static_cast<double>(std::log1p(std::exp(lx)));
}

// Reference Adam on a plain array; an intentionally separate scalar loop.
struct ScalarAdam {
  double lr, b1, b2, eps;
  std::vector<double> m, v;
  std::uint64_t t = 0;
  ScalarAdam(std::size_t n, double lr_, double b1_, double b2_, double eps_)
      : lr(lr_), b1(b1_), b2(b2_), eps(eps_), m(n, 0.0), v(n, 0.0) {}
  void step(std::vector<double>& params, const std::vector<double>& grads) {
    ++t;
    for (std::size_t i = 0; i < params.size(); ++i) {
      m[i] = b1 * m[i] + (1 - b1) * grads[i];
      v[i] = b2 * v[i] + (1 - b2) * grads[i] * grads[i];
      const double mh = m[i] / (1 - std::pow(b1, static_cast<double>(t)));
      const double vh = v[i] / (1 - std::pow(b2, static_cast<double>(t)));
      params[i] -= lr * mh / (std::sqrt(vh) + eps);
    }
  }
};

// Central finite differences over every parameter of `model`, compared to the
// `analytic` gradients (grad_views order). `loss` must re-evaluate the full
// scalar objective from the current parameters without side effects.
struct FdReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_exact = 0.0, worst_numeric = 0.0;
};

inline FdReport check_gradients_fd(smgan::MlpModel& model, const smgan::ModelGrads& analytic,
                                   const std::function<double()>& loss, double h, double rtol) {
  FdReport rep;
  double worst_gap = 0.0;
  auto params = smgan::param_views(model);
  auto grads = smgan::grad_views(model, analytic);
  for (std::size_t g = 0; g < params.size(); ++g) {
    for (std::size_t i = 0; i < params[g].size(); ++i) {
      const double saved = params[g][i];
      params[g][i] = saved + h;
      const double up = loss();
      params[g][i] = saved - h;
      const double down = loss();
      params[g][i] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double exact = grads[g][i];
      const double tol = rtol * std::max(std::abs(numeric), std::abs(exact)) + 1e-9;
      const double gap = std::abs(numeric - exact);
      ++rep.checked;
      if (gap > tol) {
        ++rep.violations;
        if (gap > worst_gap) {
          worst_gap = gap;
          rep.worst_exact = exact;
          rep.worst_numeric = numeric;
        }
      }
    }
  }
  return rep;
}

// Brute-force precision/recall curve and trapezoidal area: loops over every
// row for every candidate threshold.
struct BrutePr {
  std::vector<std::array<double, 3>> curve;  // threshold, precision, recall
  double auc = 0.0;
};

inline BrutePr brute_pr(const std::vector<double>& scores, const std::vector<int>& labels) {
  std::vector<double> cuts = scores;
  std::sort(cuts.begin(), cuts.end(), std::greater<double>());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::size_t positives = 0;
  for (int l : labels) positives += l == 1 ? 1u : 0u;

  BrutePr out;
  for (double cut : cuts) {
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] >= cut) {
        if (labels[i] == 1)
          ++tp;
        else
          ++fp;
      }
    }
    const double p = tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp);
    const double r = positives == 0 ? 0.0 : double(tp) / double(positives);
    out.curve.push_back({cut, p, r});
  }
  if (out.curve.empty()) return out;
  double prev_r = 0.0, prev_p = out.curve.front()[1];
  for (const auto& pt : out.curve) {
    out.auc += (pt[2] - prev_r) * (pt[1] + prev_p) / 2.0;
    prev_r = pt[2];
    prev_p = pt[1];
  }
  return out;
}

inline bool bits_equal(const smgan::Matrix& a, const smgan::Matrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.data[i] != b.data[i]) return false;
  return true;
}

inline bool params_bits_equal(const smgan::MlpModel& a, const smgan::MlpModel& b) {
  auto va = smgan::param_views(a);
  auto vb = smgan::param_views(b);
  if (va.size() != vb.size()) return false;
  for (std::size_t i = 0; i < va.size(); ++i) {
    if (va[i].size() != vb[i].size()) return false;
    for (std::size_t k = 0; k < va[i].size(); ++k)
      if (va[i][k] != vb[i][k]) return false;
  }
  return true;
}

}  // namespace test_support
