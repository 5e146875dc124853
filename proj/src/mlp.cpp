#include "smgan/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "smgan/rng.hpp"

namespace smgan {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void validate_layers(const std::vector<LayerSpec>& layers) {
  if (layers.empty()) fail("model needs at least one layer");
  std::size_t width = layers.front().in;
  if (width == 0) fail("input width must be positive");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec& l = layers[i];
    if (l.in != width)
      fail("layer " + std::to_string(i) + " expects width " + std::to_string(l.in) +
           " but receives " + std::to_string(width));
    switch (l.kind) {
      case LayerKind::Dense:
        if (l.out == 0) fail("dense layer width must be positive");
        break;
      case LayerKind::LeakyRelu:
        if (!(l.alpha > 0.0 && l.alpha < 1.0)) fail("leaky_relu slope must be in (0,1)");
        [[fallthrough]];
      case LayerKind::Relu:
      case LayerKind::Sigmoid:
      case LayerKind::BatchNorm:
        if (l.out != l.in) fail("activation layers must preserve width");
        break;
    }
    width = l.out;
  }
}

}  // namespace

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (const DenseParams& d : dense) n += d.w.size() + d.b.size();
  for (const BatchNormParams& p : norms) n += p.gamma.size() + p.beta.size();
  return n;
}

MlpModel make_mlp(const std::vector<LayerSpec>& layers, std::uint64_t seed) {
  validate_layers(layers);
  MlpModel m;
  m.layers = layers;
  Rng rng(seed);
  for (const LayerSpec& l : layers) {
    if (l.kind == LayerKind::Dense) {
      DenseParams p;
      p.w = Matrix(l.in, l.out);
      const double limit = std::sqrt(6.0 / static_cast<double>(l.in + l.out));
      for (double& v : p.w.data) v = (2.0 * rng.uniform01() - 1.0) * limit;
      p.b.assign(l.out, 0.0);
      m.dense.push_back(std::move(p));
    } else if (l.kind == LayerKind::BatchNorm) {
      BatchNormParams p;
      p.gamma.assign(l.in, 1.0);
      p.beta.assign(l.in, 0.0);
      p.running_mean.assign(l.in, 0.0);
      p.running_var.assign(l.in, 1.0);
      m.norms.push_back(std::move(p));
    }
  }
  return m;
}

Matrix forward_pass(const MlpModel& model, const Matrix& batch, bool training, ForwardCache& cache) {
  if (model.layers.empty()) fail("forward: model has no layers");
  if (batch.cols != model.input_width())
    fail("forward: batch has width " + std::to_string(batch.cols) + ", model expects " +
         std::to_string(model.input_width()));
  if (batch.rows == 0) fail("forward: empty batch");

  cache = ForwardCache{};
  cache.training = training;
  cache.inputs.reserve(model.layers.size());

  Matrix x = batch;
  std::size_t di = 0, bi = 0;
  for (const LayerSpec& layer : model.layers) {
    cache.inputs.push_back(x);
    switch (layer.kind) {
      case LayerKind::Dense: {
        const DenseParams& p = model.dense[di++];
        Matrix y = matmul(x, p.w);
        for (std::size_t r = 0; r < y.rows; ++r) {
          double* yr = y.row(r);
          for (std::size_t c = 0; c < y.cols; ++c) yr[c] += p.b[c];
        }
        x = std::move(y);
        break;
      }
      case LayerKind::Relu:
        for (double& v : x.data) v = v > 0.0 ? v : 0.0;
        break;
      case LayerKind::LeakyRelu:
        for (double& v : x.data) v = v > 0.0 ? v : layer.alpha * v;
        break;
      case LayerKind::Sigmoid:
        for (double& v : x.data) {
          if (v >= 0.0) {
            v = 1.0 / (1.0 + std::exp(-v));
          } else {
            const double e = std::exp(v);
            v = e / (1.0 + e);
          }
        }
        break;
      case LayerKind::BatchNorm: {
        const BatchNormParams& p = model.norms[bi++];
        const std::size_t w = layer.in;
        const double n = static_cast<double>(x.rows);
        BnCache bc;
        bc.mean.assign(w, 0.0);
        bc.var.assign(w, 0.0);
        bc.inv_std.assign(w, 0.0);
        if (training) {
          for (std::size_t r = 0; r < x.rows; ++r) {
            const double* xr = x.row(r);
            for (std::size_t j = 0; j < w; ++j) bc.mean[j] += xr[j];
          }
          for (std::size_t j = 0; j < w; ++j) bc.mean[j] /= n;
          for (std::size_t r = 0; r < x.rows; ++r) {
            const double* xr = x.row(r);
            for (std::size_t j = 0; j < w; ++j) {
              const double dev = xr[j] - bc.mean[j];
              bc.var[j] += dev * dev;
            }
          }
          for (std::size_t j = 0; j < w; ++j) bc.var[j] /= n;
        } else {
          bc.mean = p.running_mean;
          bc.var = p.running_var;
        }
        for (std::size_t j = 0; j < w; ++j) bc.inv_std[j] = 1.0 / std::sqrt(bc.var[j] + p.eps);
        bc.xhat = Matrix(x.rows, w);
        Matrix y(x.rows, w);
        for (std::size_t r = 0; r < x.rows; ++r) {
          const double* xr = x.row(r);
          double* hr = bc.xhat.row(r);
          double* yr = y.row(r);
          for (std::size_t j = 0; j < w; ++j) {
            hr[j] = (xr[j] - bc.mean[j]) * bc.inv_std[j];
            yr[j] = p.gamma[j] * hr[j] + p.beta[j];
          }
        }
        cache.bn.push_back(std::move(bc));
        x = std::move(y);
        break;
      }
    }
  }
  if (!all_finite(x)) throw std::runtime_error("forward: non-finite values in network output");
  cache.output = x;
  return x;
}

Matrix forward(MlpModel& model, const Matrix& batch, bool training, ForwardCache* cache) {
  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  Matrix out = forward_pass(model, batch, training, c);
  model.training = training;
  if (training && !model.norms.empty()) {
    const double n = static_cast<double>(batch.rows);
    std::size_t bi = 0;
    for (const LayerSpec& layer : model.layers) {
      if (layer.kind != LayerKind::BatchNorm) continue;
      BatchNormParams& p = model.norms[bi];
      const BnCache& bc = c.bn[bi];
      const double mom = p.momentum;
      for (std::size_t j = 0; j < p.gamma.size(); ++j) {
        const double unbiased = n > 1.0 ? bc.var[j] * n / (n - 1.0) : bc.var[j];
        p.running_mean[j] = (1.0 - mom) * p.running_mean[j] + mom * bc.mean[j];
        p.running_var[j] = (1.0 - mom) * p.running_var[j] + mom * unbiased;
      }
      ++bi;
    }
  }
  return out;
}

Matrix predict(const MlpModel& model, const Matrix& batch) {
  ForwardCache cache;
  return forward_pass(model, batch, false, cache);
}

ModelGrads zero_grads(const MlpModel& model) {
  ModelGrads g;
  for (const DenseParams& d : model.dense) {
    g.dw.emplace_back(d.w.rows, d.w.cols);
    g.db.emplace_back(d.b.size(), 0.0);
  }
  for (const BatchNormParams& p : model.norms) {
    g.dgamma.emplace_back(p.gamma.size(), 0.0);
    g.dbeta.emplace_back(p.beta.size(), 0.0);
  }
  return g;
}

void accumulate(ModelGrads& into, const ModelGrads& from) {
  if (into.dw.size() != from.dw.size() || into.dgamma.size() != from.dgamma.size())
    fail("accumulate: gradient structures differ");
  for (std::size_t i = 0; i < into.dw.size(); ++i) {
    if (!into.dw[i].same_shape(from.dw[i])) fail("accumulate: weight gradient shape mismatch");
    for (std::size_t k = 0; k < into.dw[i].size(); ++k) into.dw[i].data[k] += from.dw[i].data[k];
    for (std::size_t k = 0; k < into.db[i].size(); ++k) into.db[i][k] += from.db[i][k];
  }
  for (std::size_t i = 0; i < into.dgamma.size(); ++i) {
    for (std::size_t k = 0; k < into.dgamma[i].size(); ++k) into.dgamma[i][k] += from.dgamma[i][k];
    for (std::size_t k = 0; k < into.dbeta[i].size(); ++k) into.dbeta[i][k] += from.dbeta[i][k];
  }
}

BackwardResult backward(const MlpModel& model, const ForwardCache& cache, const Matrix& grad_output) {
  if (cache.inputs.size() != model.layers.size() ||
      cache.bn.size() != model.norms.size())
    fail("backward: cache does not match model (stale or mismatched cache)");
  if (!grad_output.same_shape(cache.output))
    fail("backward: grad_output shape does not match cached output");

  BackwardResult res;
  res.grads = zero_grads(model);
  Matrix g = grad_output;

  std::size_t di = model.dense.size();
  std::size_t bi = model.norms.size();
  for (std::size_t li = model.layers.size(); li-- > 0;) {
    const LayerSpec& layer = model.layers[li];
    const Matrix& x = cache.inputs[li];
    if (g.rows != x.rows || x.cols != layer.in)
      fail("backward: cache does not match model (stale or mismatched cache)");
    switch (layer.kind) {
      case LayerKind::Dense: {
        --di;
        const DenseParams& p = model.dense[di];
        res.grads.dw[di] = matmul_tn(x, g);
        res.grads.db[di] = column_sums(g);
        g = matmul_nt(g, p.w);
        break;
      }
      case LayerKind::Relu: {
        for (std::size_t k = 0; k < g.size(); ++k)
          if (!(x.data[k] > 0.0)) g.data[k] = 0.0;
        break;
      }
      case LayerKind::LeakyRelu: {
        for (std::size_t k = 0; k < g.size(); ++k)
          if (!(x.data[k] > 0.0)) g.data[k] *= layer.alpha;
        break;
      }
      case LayerKind::Sigmoid: {
        const Matrix& y = li + 1 < model.layers.size() ? cache.inputs[li + 1] : cache.output;
        for (std::size_t k = 0; k < g.size(); ++k) {
          const double s = y.data[k];
          g.data[k] *= s * (1.0 - s);
        }
        break;
      }
      case LayerKind::BatchNorm: {
        --bi;
        const BatchNormParams& p = model.norms[bi];
        const BnCache& bc = cache.bn[bi];
        const std::size_t w = layer.in;
        const double n = static_cast<double>(x.rows);
        Matrix gx(x.rows, w);
        for (std::size_t j = 0; j < w; ++j) {
          double sum_dy = 0.0, sum_dy_xhat = 0.0;
          for (std::size_t r = 0; r < x.rows; ++r) {
            const double dy = g(r, j);
            sum_dy += dy;
            sum_dy_xhat += dy * bc.xhat(r, j);
          }
          res.grads.dgamma[bi][j] += sum_dy_xhat;
          res.grads.dbeta[bi][j] += sum_dy;
          const double gam = p.gamma[j];
          const double istd = bc.inv_std[j];
          if (cache.training) {
            for (std::size_t r = 0; r < x.rows; ++r) {
              const double dxhat = g(r, j) * gam;
              gx(r, j) = istd / n *
                         (n * dxhat - sum_dy * gam - bc.xhat(r, j) * sum_dy_xhat * gam);
            }
          } else {
            for (std::size_t r = 0; r < x.rows; ++r) gx(r, j) = g(r, j) * gam * istd;
          }
        }
        g = std::move(gx);
        break;
      }
    }
  }
  res.input_grad = std::move(g);
  return res;
}

namespace {

template <class Model, class Span>
std::vector<Span> views_impl(Model& model) {
  std::vector<Span> out;
  std::size_t di = 0, bi = 0;
  for (const LayerSpec& layer : model.layers) {
    if (layer.kind == LayerKind::Dense) {
      auto& d = model.dense[di++];
      out.emplace_back(d.w.data.data(), d.w.data.size());
      out.emplace_back(d.b.data(), d.b.size());
    } else if (layer.kind == LayerKind::BatchNorm) {
      auto& p = model.norms[bi++];
      out.emplace_back(p.gamma.data(), p.gamma.size());
      out.emplace_back(p.beta.data(), p.beta.size());
    }
  }
  return out;
}

}  // namespace

std::vector<std::span<double>> param_views(MlpModel& model) {
  return views_impl<MlpModel, std::span<double>>(model);
}

std::vector<std::span<const double>> param_views(const MlpModel& model) {
  return views_impl<const MlpModel, std::span<const double>>(model);
}

std::vector<std::span<const double>> grad_views(const MlpModel& model, const ModelGrads& grads) {
  std::vector<std::span<const double>> out;
  std::size_t di = 0, bi = 0;
  for (const LayerSpec& layer : model.layers) {
    if (layer.kind == LayerKind::Dense) {
      out.emplace_back(grads.dw[di].data.data(), grads.dw[di].data.size());
      out.emplace_back(grads.db[di].data(), grads.db[di].size());
      ++di;
    } else if (layer.kind == LayerKind::BatchNorm) {
      out.emplace_back(grads.dgamma[bi].data(), grads.dgamma[bi].size());
      out.emplace_back(grads.dbeta[bi].data(), grads.dbeta[bi].size());
      ++bi;
    }
  }
  return out;
}

}  // namespace smgan
