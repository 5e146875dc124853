#pragma once

#include <cstdint>
#include <vector>

#include "smgan/dataset.hpp"
#include "smgan/mlp.hpp"

namespace smgan {

// The fixed evaluation network: ReLU hidden layers, a single output unit, MAE
// loss on the output, Adam. The output head is switchable; sigmoid squashes
// scores into (0,1), relu matches the hidden activation, linear leaves the
// logit untouched. The decision threshold applies to the head's output.
struct ClassifierSpec {
  std::vector<std::size_t> hidden = {256, 128};
  enum class OutputHead { Sigmoid, Relu, Linear };
  OutputHead head = OutputHead::Linear;
  double learning_rate = 1e-5;
  std::size_t batch_size = 128;
  std::size_t max_epochs = 2000;
  std::size_t patience = 600;  // epochs without validation F1 improvement
  double threshold = 0.5;
  std::uint64_t seed = 0;
};

struct ClassifierResult {
  MlpModel model;        // parameters of the best-validation-F1 epoch
  std::size_t best_epoch = 0;
  std::vector<double> val_f1;  // per-epoch validation F1
};

MlpModel make_classifier(std::size_t d, const ClassifierSpec& spec);

// Minibatch training with early stopping on validation F1; returns the
// checkpoint from the best epoch, not the last one. max_epochs 0 returns the
// freshly initialized model.
ClassifierResult train_classifier(const Dataset& train, const Dataset& val,
                                  const ClassifierSpec& spec);

}  // namespace smgan
