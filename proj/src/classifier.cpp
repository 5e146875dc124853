#include "smgan/classifier.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "smgan/adam.hpp"
#include "smgan/losses.hpp"
#include "smgan/metrics.hpp"
#include "smgan/rng.hpp"

namespace smgan {

MlpModel make_classifier(std::size_t d, const ClassifierSpec& spec) {
  std::vector<LayerSpec> layers;
  std::size_t w = d;
  for (std::size_t h : spec.hidden) {
    if (h == 0) throw std::invalid_argument("classifier hidden widths must be positive");
    layers.push_back(LayerSpec::dense(w, h));
    layers.push_back(LayerSpec::relu(h));
    w = h;
  }
  layers.push_back(LayerSpec::dense(w, 1));
  switch (spec.head) {
    case ClassifierSpec::OutputHead::Sigmoid:
      layers.push_back(LayerSpec::sigmoid(1));
      break;
    case ClassifierSpec::OutputHead::Relu:
      layers.push_back(LayerSpec::relu(1));
      break;
    case ClassifierSpec::OutputHead::Linear:
      break;
  }
  return make_mlp(layers, derive_seed(spec.seed, 0xC1));
}

ClassifierResult train_classifier(const Dataset& train, const Dataset& val,
                                  const ClassifierSpec& spec) {
  if (train.size() == 0) throw std::invalid_argument("train_classifier: empty training set");
  if (val.size() == 0) throw std::invalid_argument("train_classifier: empty validation set");
  if (train.d() != val.d())
    throw std::invalid_argument("train_classifier: train/val dimension mismatch");
  if (!(spec.threshold > 0.0 && spec.threshold < 1.0))
    throw std::invalid_argument("train_classifier: threshold must lie in (0,1)");

  ClassifierResult res;
  MlpModel model = make_classifier(train.d(), spec);
  res.model = model;
  if (spec.max_epochs == 0) return res;

  AdamState opt = make_adam(model, AdamConfig{spec.learning_rate, 0.9, 0.999, 1e-8});
  Rng rng(derive_seed(spec.seed, 0xC2));

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = std::min<std::size_t>(spec.batch_size, train.size());

  double best_f1 = -1.0;
  std::size_t last_improvement = 0;
  for (std::size_t epoch = 1; epoch <= spec.max_epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t count = std::min(batch, order.size() - start);
      const std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(start),
                                         order.begin() + static_cast<std::ptrdiff_t>(start + count));
      const Matrix xb = take_rows(train.features, idx);
      Matrix targets(count, 1);
      for (std::size_t i = 0; i < count; ++i) targets(i, 0) = train.labels[idx[i]];

      ForwardCache cache;
      const Matrix out = forward(model, xb, true, &cache);
      LossGrad lg = mae_loss(out, targets);
      if (!std::isfinite(lg.loss))
        throw std::runtime_error("train_classifier: loss diverged at epoch " + std::to_string(epoch));
      BackwardResult bw = backward(model, cache, lg.grad);
      adam_step(model, bw.grads, opt);
    }

    const double f1 = evaluate(model, val, spec.threshold).f1;
    res.val_f1.push_back(f1);
    if (f1 > best_f1) {
      best_f1 = f1;
      last_improvement = epoch;
      res.best_epoch = epoch;
      res.model = model;
    } else {
      if (f1 == best_f1) {
        // Ties refresh the checkpoint: among epochs achieving the best
        // validation F1 the latest one carries the most settled scores.
        res.best_epoch = epoch;
        res.model = model;
      }
      if (epoch - last_improvement >= spec.patience) break;
    }
  }
  return res;
}

}  // namespace smgan
