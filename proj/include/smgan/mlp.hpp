#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smgan/matrix.hpp"

namespace smgan {

enum class LayerKind { Dense, Relu, LeakyRelu, Sigmoid, BatchNorm };

struct LayerSpec {
  LayerKind kind = LayerKind::Dense;
  std::size_t in = 0;
  std::size_t out = 0;
  double alpha = 0.2;  // LeakyRelu slope, in (0,1)

  static LayerSpec dense(std::size_t in, std::size_t out) { return {LayerKind::Dense, in, out, 0.0}; }
  static LayerSpec relu(std::size_t width) { return {LayerKind::Relu, width, width, 0.0}; }
  static LayerSpec leaky_relu(std::size_t width, double alpha = 0.2) {
    return {LayerKind::LeakyRelu, width, width, alpha};
  }
  static LayerSpec sigmoid(std::size_t width) { return {LayerKind::Sigmoid, width, width, 0.0}; }
  static LayerSpec batchnorm(std::size_t width) { return {LayerKind::BatchNorm, width, width, 0.0}; }
};

struct DenseParams {
  Matrix w;  // in x out
  std::vector<double> b;
};

struct BatchNormParams {
  std::vector<double> gamma, beta;
  std::vector<double> running_mean, running_var;
  double momentum = 0.1;
  double eps = 1e-5;
};

// Fixed-topology dense network shared by the generator, the discriminator and
// the evaluation classifier. A model being trained belongs to one thread;
// inference through predict() never mutates it and is safe to share.
struct MlpModel {
  std::vector<LayerSpec> layers;
  std::vector<DenseParams> dense;      // one per Dense layer, in layer order
  std::vector<BatchNormParams> norms;  // one per BatchNorm layer, in layer order
  bool training = false;

  std::size_t input_width() const { return layers.empty() ? 0 : layers.front().in; }
  std::size_t output_width() const { return layers.empty() ? 0 : layers.back().out; }
  std::size_t parameter_count() const;
};

// Validates that layer widths chain and initializes parameters: dense weights
// uniform in +-sqrt(6/(fan_in+fan_out)), biases zero, batchnorm gamma=1 beta=0
// with running mean 0 / variance 1.
MlpModel make_mlp(const std::vector<LayerSpec>& layers, std::uint64_t seed);

struct BnCache {
  std::vector<double> mean;       // statistics used for normalization
  std::vector<double> var;        // biased batch variance (training mode)
  std::vector<double> inv_std;
  Matrix xhat;
};

struct ForwardCache {
  bool training = false;
  std::vector<Matrix> inputs;  // input seen by each layer
  std::vector<BnCache> bn;     // one per BatchNorm layer, in layer order
  Matrix output;
};

// Pure forward: batchnorm uses batch statistics when `training`, running
// statistics otherwise. Never touches model state.
Matrix forward_pass(const MlpModel& model, const Matrix& batch, bool training, ForwardCache& cache);

// Training-facing forward: as forward_pass, and when `training` also folds the
// minibatch statistics into the running batchnorm state.
Matrix forward(MlpModel& model, const Matrix& batch, bool training, ForwardCache* cache = nullptr);

// Inference on an immutable model.
Matrix predict(const MlpModel& model, const Matrix& batch);

struct ModelGrads {
  std::vector<Matrix> dw;
  std::vector<std::vector<double>> db;
  std::vector<std::vector<double>> dgamma;
  std::vector<std::vector<double>> dbeta;
};

ModelGrads zero_grads(const MlpModel& model);
void accumulate(ModelGrads& into, const ModelGrads& from);

struct BackwardResult {
  ModelGrads grads;
  Matrix input_grad;
};

// Exact reverse-mode gradients for every W, b, gamma, beta plus the batch
// input. `cache` must come from a forward over the same model and batch.
BackwardResult backward(const MlpModel& model, const ForwardCache& cache, const Matrix& grad_output);

// Parameter arrays in a fixed traversal order: layers in order, dense emitting
// weights then bias, batchnorm emitting gamma then beta. Gradient views follow
// the same order, so optimizer state lines up index for index.
std::vector<std::span<double>> param_views(MlpModel& model);
std::vector<std::span<const double>> param_views(const MlpModel& model);
std::vector<std::span<const double>> grad_views(const MlpModel& model, const ModelGrads& grads);

// Checkpoint round trip. JSON keeps full double precision.
std::string model_to_json(const MlpModel& model);
MlpModel model_from_json(const std::string& text);

}  // namespace smgan
