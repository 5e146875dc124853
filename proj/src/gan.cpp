#include "smgan/gan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace smgan {

LatentSource LatentSource::noise(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("latent noise width must be positive");
  LatentSource s;
  s.kind_ = Kind::Noise;
  s.dim_ = dim;
  return s;
}

LatentSource LatentSource::repertoire(Matrix rows) {
  if (rows.rows == 0 || rows.cols == 0)
    throw std::invalid_argument("latent repertoire must be non-empty");
  LatentSource s;
  s.kind_ = Kind::Repertoire;
  s.rows_ = std::move(rows);
  return s;
}

const Matrix& LatentSource::rows() const {
  if (kind_ != Kind::Repertoire)
    throw std::logic_error("latent source holds no repertoire");
  return rows_;
}

MlpModel make_generator(std::size_t d, const std::vector<std::size_t>& hidden, std::uint64_t seed) {
  std::vector<LayerSpec> layers;
  std::size_t w = d;
  for (std::size_t h : hidden) {
    layers.push_back(LayerSpec::dense(w, h));
    layers.push_back(LayerSpec::batchnorm(h));
    layers.push_back(LayerSpec::relu(h));
    w = h;
  }
  layers.push_back(LayerSpec::dense(w, d));
  return make_mlp(layers, seed);
}

MlpModel make_discriminator(std::size_t d, const std::vector<std::size_t>& hidden, double alpha,
                            std::uint64_t seed) {
  std::vector<LayerSpec> layers;
  std::size_t w = d;
  for (std::size_t h : hidden) {
    layers.push_back(LayerSpec::dense(w, h));
    layers.push_back(LayerSpec::leaky_relu(h, alpha));
    w = h;
  }
  layers.push_back(LayerSpec::dense(w, 1));
  return make_mlp(layers, seed);
}

DiscriminatorLoss discriminator_loss(const Matrix& real_logits, const Matrix& fake_logits) {
  if (real_logits.size() == 0 || fake_logits.size() == 0)
    throw std::invalid_argument("discriminator_loss: empty logits");
  const Matrix ones(real_logits.rows, real_logits.cols, 1.0);
  const Matrix zeros(fake_logits.rows, fake_logits.cols, 0.0);
  LossGrad real = bce_with_logits(real_logits, ones);
  LossGrad fake = bce_with_logits(fake_logits, zeros);
  DiscriminatorLoss out;
  out.loss = real.loss + fake.loss;
  out.grad_real = std::move(real.grad);
  out.grad_fake = std::move(fake.grad);
  return out;
}

LossGrad generator_loss(const Matrix& fake_logits) {
  if (fake_logits.size() == 0) throw std::invalid_argument("generator_loss: empty logits");
  const Matrix ones(fake_logits.rows, fake_logits.cols, 1.0);
  return bce_with_logits(fake_logits, ones);
}

LatentBatcher::LatentBatcher(const LatentSource& src, Rng& rng) : src_(src), rng_(rng) {
  if (src.kind() == LatentSource::Kind::Repertoire) {
    order_.resize(src.rows().rows);
    std::iota(order_.begin(), order_.end(), 0);
  }
}

void LatentBatcher::start_epoch() {
  if (src_.kind() == LatentSource::Kind::Repertoire) {
    rng_.shuffle(order_);
    pos_ = 0;
  }
}

Matrix LatentBatcher::next(std::size_t count) {
  if (src_.kind() == LatentSource::Kind::Noise) {
    Matrix z(count, src_.width());
    for (double& v : z.data) v = rng_.normal();
    return z;
  }
  std::vector<std::size_t> idx(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (pos_ == order_.size()) {
      rng_.shuffle(order_);
      pos_ = 0;
    }
    idx[i] = order_[pos_++];
  }
  return take_rows(src_.rows(), idx);
}

double discriminator_step(GanModel& gm, AdamState& opt_d, const Matrix& real_batch,
                          const Matrix& latent_batch) {
  ForwardCache gen_cache;
  const Matrix fake = forward(gm.generator, latent_batch, true, &gen_cache);
  ForwardCache real_cache, fake_cache;
  const Matrix real_logits = forward(gm.discriminator, real_batch, true, &real_cache);
  const Matrix fake_logits = forward(gm.discriminator, fake, true, &fake_cache);
  DiscriminatorLoss dl = discriminator_loss(real_logits, fake_logits);
  BackwardResult br = backward(gm.discriminator, real_cache, dl.grad_real);
  BackwardResult bf = backward(gm.discriminator, fake_cache, dl.grad_fake);
  accumulate(br.grads, bf.grads);
  adam_step(gm.discriminator, br.grads, opt_d);
  gm.trace.disc_updates++;
  return dl.loss;
}

double generator_step(GanModel& gm, AdamState& opt_g, const Matrix& latent_batch) {
  ForwardCache gen_cache;
  const Matrix fake = forward(gm.generator, latent_batch, true, &gen_cache);
  ForwardCache disc_cache;
  const Matrix fake_logits = forward(gm.discriminator, fake, true, &disc_cache);
  LossGrad gl = generator_loss(fake_logits);
  BackwardResult through_disc = backward(gm.discriminator, disc_cache, gl.grad);
  BackwardResult bg = backward(gm.generator, gen_cache, through_disc.input_grad);
  adam_step(gm.generator, bg.grads, opt_g);
  gm.trace.gen_updates++;
  return gl.loss;
}

GanModel train_gan(const Matrix& real, const LatentSource& latent, const GanConfig& cfg,
                   const GanValidationHook& hook) {
  if (real.rows == 0) throw std::invalid_argument("train_gan: empty real set");
  if (real.rows < 2) throw std::invalid_argument("train_gan: need at least two real rows");
  if (latent.width() != real.cols)
    throw std::invalid_argument("train_gan: latent width " + std::to_string(latent.width()) +
                                " does not match data width " + std::to_string(real.cols));
  if (cfg.disc_steps < 1) throw std::invalid_argument("train_gan: disc_steps must be >= 1");
  if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("train_gan: learning rate must be > 0");
  if (cfg.batch_size == 0) throw std::invalid_argument("train_gan: batch size must be >= 1");

  GanModel gm;
  gm.data_width = real.cols;
  gm.generator = make_generator(real.cols, cfg.gen_hidden, derive_seed(cfg.seed, 0xA1));
  gm.discriminator =
      make_discriminator(real.cols, cfg.disc_hidden, cfg.leaky_alpha, derive_seed(cfg.seed, 0xD1));

  const AdamConfig adam_cfg{cfg.learning_rate, 0.9, 0.999, 1e-8};
  AdamState opt_g = make_adam(gm.generator, adam_cfg);
  AdamState opt_d = make_adam(gm.discriminator, adam_cfg);

  Rng rng(derive_seed(cfg.seed, 0x5A));
  LatentBatcher batcher(latent, rng);

  std::vector<std::size_t> order(real.rows);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = std::min<std::size_t>(cfg.batch_size, real.rows);

  double best_f1 = -1.0;
  std::size_t best_epoch = 0;
  std::size_t near_zero_disc = 0, near_zero_gen = 0;

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    rng.shuffle(order);
    batcher.start_epoch();

    double disc_sum = 0.0, gen_sum = 0.0;
    std::size_t disc_batches = 0, gen_batches = 0;
    try {
      for (std::size_t start = 0; start < order.size(); start += batch) {
        const std::size_t count = std::min(batch, order.size() - start);
        const std::vector<std::size_t> idx(
            order.begin() + static_cast<std::ptrdiff_t>(start),
            order.begin() + static_cast<std::ptrdiff_t>(start + count));
        const Matrix real_batch = take_rows(real, idx);
        // One latent minibatch per iteration, shared by the discriminator and
        // generator updates.
        const Matrix latent_batch = batcher.next(count);
        for (std::size_t s = 0; s < cfg.disc_steps; ++s) {
          disc_sum += discriminator_step(gm, opt_d, real_batch, latent_batch);
          ++disc_batches;
        }
        gen_sum += generator_step(gm, opt_g, latent_batch);
        ++gen_batches;
      }
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("train_gan: training diverged at epoch " + std::to_string(epoch) +
                               ": " + e.what());
    }

    const double disc_mean = disc_sum / static_cast<double>(disc_batches);
    const double gen_mean = gen_sum / static_cast<double>(gen_batches);
    if (!std::isfinite(disc_mean) || !std::isfinite(gen_mean))
      throw std::runtime_error("train_gan: loss diverged at epoch " + std::to_string(epoch));
    gm.trace.disc_loss.push_back(disc_mean);
    gm.trace.gen_loss.push_back(gen_mean);

    near_zero_disc = disc_mean < cfg.near_zero_eps ? near_zero_disc + 1 : 0;
    near_zero_gen = gen_mean < cfg.near_zero_eps ? near_zero_gen + 1 : 0;
    if (near_zero_disc >= cfg.near_zero_patience || near_zero_gen >= cfg.near_zero_patience) {
      const char* which = near_zero_disc >= cfg.near_zero_patience ? "discriminator" : "generator";
      throw std::runtime_error("train_gan: " + std::string(which) + " loss stayed below " +
                               std::to_string(cfg.near_zero_eps) + " for " +
                               std::to_string(cfg.near_zero_patience) +
                               " consecutive epochs (epoch " + std::to_string(epoch) +
                               "); training collapsed");
    }

    if (hook) {
      const double f1 = hook(epoch, gm);
      gm.trace.val_f1.push_back(f1);
      if (f1 > best_f1) {
        best_f1 = f1;
        best_epoch = epoch;
      } else if (epoch - best_epoch >= cfg.patience) {
        break;
      }
    }
  }
  return gm;
}

Matrix accumulate_fake(const GanModel& gm, const LatentSource& latent, std::size_t n_fake,
                       const AccumulateOptions& opt) {
  const std::size_t d = gm.data_width;
  Matrix out(n_fake, d);
  if (n_fake == 0) return out;
  if (latent.width() != d)
    throw std::invalid_argument("accumulate_fake: latent width does not match model");

  Rng rng(derive_seed(opt.seed, 0xFA));
  const std::size_t budget = opt.filter_threshold ? 50 * n_fake : 0;
  std::size_t produced = 0, drawn = 0, cursor = 0;

  auto next_latents = [&](std::size_t count) {
    if (latent.kind() == LatentSource::Kind::Noise) {
      Matrix z(count, d);
      for (double& v : z.data) v = rng.normal();
      return z;
    }
    const Matrix& rep = latent.rows();
    std::vector<std::size_t> idx(count);
    for (std::size_t i = 0; i < count; ++i) {
      idx[i] = cursor;
      cursor = (cursor + 1) % rep.rows;
    }
    return take_rows(rep, idx);
  };

  while (produced < n_fake) {
    std::size_t chunk = n_fake - produced;
    if (opt.filter_threshold) {
      chunk = std::min<std::size_t>(256, budget - drawn);
      if (chunk == 0)
        throw std::runtime_error("accumulate_fake: draw budget of " + std::to_string(budget) +
                                 " exhausted with " + std::to_string(produced) + "/" +
                                 std::to_string(n_fake) + " samples accepted");
    }
    const Matrix z = next_latents(chunk);
    drawn += chunk;
    const Matrix y = predict(gm.generator, z);
    std::vector<std::size_t> keep;
    if (opt.filter_threshold) {
      const Matrix logits = predict(gm.discriminator, y);
      for (std::size_t r = 0; r < y.rows && produced + keep.size() < n_fake; ++r)
        if (sigmoid(logits(r, 0)) >= *opt.filter_threshold) keep.push_back(r);
    } else {
      keep.resize(y.rows);
      std::iota(keep.begin(), keep.end(), 0);
    }
    for (std::size_t r : keep) {
      double* dst = out.row(produced++);
      const double* src = y.row(r);
      for (std::size_t c = 0; c < d; ++c)
        dst[c] = opt.clamp01 ? std::clamp(src[c], 0.0, 1.0) : src[c];
    }
  }
  return out;
}

void write_trace_csv(const TrainTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "epoch,disc_loss,gen_loss,val_f1\n";
  char buf[64];
  for (std::size_t e = 0; e < trace.disc_loss.size(); ++e) {
    out << (e + 1);
    std::snprintf(buf, sizeof(buf), ",%.17g", trace.disc_loss[e]);
    out << buf;
    std::snprintf(buf, sizeof(buf), ",%.17g", trace.gen_loss[e]);
    out << buf;
    if (e < trace.val_f1.size()) {
      std::snprintf(buf, sizeof(buf), ",%.17g", trace.val_f1[e]);
      out << buf;
    } else {
      out << ",";
    }
    out << "\n";
  }
}

}  // namespace smgan
