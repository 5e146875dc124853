#pragma once

#include <cmath>

#include "smgan/matrix.hpp"

namespace smgan {

// log(1 + exp(x)) without overflow for any double.
inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

struct LossGrad {
  double loss = 0.0;
  Matrix grad;
};

// Mean of softplus(z) - z*t over all elements; targets must be 0 or 1.
// Gradient is (sigmoid(z) - t) / count. Stable for |z| up to 1e4 and beyond.
LossGrad bce_with_logits(const Matrix& logits, const Matrix& targets);

// Mean absolute error with subgradient sign(pred - t)/count, sign(0) = 0.
LossGrad mae_loss(const Matrix& pred, const Matrix& targets);

}  // namespace smgan
