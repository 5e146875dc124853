#include "smgan/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace smgan {

AdamState make_adam(const MlpModel& model, const AdamConfig& cfg) {
  if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("adam: learning rate must be > 0");
  AdamState s;
  s.cfg = cfg;
  for (const auto& view : param_views(model)) {
    s.m.emplace_back(view.size(), 0.0);
    s.v.emplace_back(view.size(), 0.0);
  }
  return s;
}

void adam_update(std::span<double> params, std::span<const double> grads,
                 std::vector<double>& m, std::vector<double>& v, std::uint64_t t,
                 const AdamConfig& cfg) {
  if (params.size() != grads.size() || params.size() != m.size() || params.size() != v.size())
    throw std::invalid_argument("adam: parameter/gradient shape mismatch");
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    params[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.eps);
  }
}

void adam_step(MlpModel& model, const ModelGrads& grads, AdamState& state) {
  auto params = param_views(model);
  auto gviews = grad_views(model, grads);
  if (params.size() != state.m.size() || params.size() != gviews.size())
    throw std::invalid_argument("adam: state does not match model");
  ++state.t;
  for (std::size_t i = 0; i < params.size(); ++i)
    adam_update(params[i], gviews[i], state.m[i], state.v[i], state.t, state.cfg);
}

}  // namespace smgan
