#include "smgan/losses.hpp"

#include <stdexcept>

namespace smgan {

LossGrad bce_with_logits(const Matrix& logits, const Matrix& targets) {
  if (!logits.same_shape(targets))
    throw std::invalid_argument("bce_with_logits: shape mismatch");
  if (logits.size() == 0) throw std::invalid_argument("bce_with_logits: empty input");
  const double n = static_cast<double>(logits.size());
  LossGrad out;
  out.grad = Matrix(logits.rows, logits.cols);
  double total = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    const double z = logits.data[k];
    const double t = targets.data[k];
    if (t != 0.0 && t != 1.0)
      throw std::invalid_argument("bce_with_logits: targets must be 0 or 1");
    total += softplus(z) - z * t;
    out.grad.data[k] = (sigmoid(z) - t) / n;
  }
  out.loss = total / n;
  return out;
}

LossGrad mae_loss(const Matrix& pred, const Matrix& targets) {
  if (!pred.same_shape(targets)) throw std::invalid_argument("mae_loss: shape mismatch");
  if (pred.size() == 0) throw std::invalid_argument("mae_loss: empty input");
  const double n = static_cast<double>(pred.size());
  LossGrad out;
  out.grad = Matrix(pred.rows, pred.cols);
  double total = 0.0;
  for (std::size_t k = 0; k < pred.size(); ++k) {
    const double d = pred.data[k] - targets.data[k];
    total += std::abs(d);
    out.grad.data[k] = d > 0.0 ? 1.0 / n : (d < 0.0 ? -1.0 / n : 0.0);
  }
  out.loss = total / n;
  return out;
}

}  // namespace smgan
