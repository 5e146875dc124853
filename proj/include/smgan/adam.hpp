#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "smgan/mlp.hpp"

namespace smgan {

struct AdamConfig {
  double learning_rate = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second moment accumulators, shaped exactly like the model parameters
// in param_views order. t counts completed steps.
struct AdamState {
  AdamConfig cfg;
  std::uint64_t t = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
};

AdamState make_adam(const MlpModel& model, const AdamConfig& cfg);

// One bias-corrected Adam update of a single parameter array; t is the
// 1-based step index.
void adam_update(std::span<double> params, std::span<const double> grads,
                 std::vector<double>& m, std::vector<double>& v, std::uint64_t t,
                 const AdamConfig& cfg);

// Updates every model parameter from `grads`; increments state.t once.
void adam_step(MlpModel& model, const ModelGrads& grads, AdamState& state);

}  // namespace smgan
