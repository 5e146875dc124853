#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "smgan/adam.hpp"
#include "smgan/losses.hpp"
#include "smgan/matrix.hpp"
#include "smgan/mlp.hpp"
#include "smgan/rng.hpp"

namespace smgan {

// What the generator consumes: standard-normal noise of a fixed width, or a
// fixed repertoire of pre-generated samples. Both sides of the experiment run
// the identical trainer; the latent source is the only difference.
class LatentSource {
 public:
  enum class Kind { Noise, Repertoire };

  static LatentSource noise(std::size_t dim);
  static LatentSource repertoire(Matrix rows);

  Kind kind() const { return kind_; }
  std::size_t width() const { return kind_ == Kind::Noise ? dim_ : rows_.cols; }
  const Matrix& rows() const;

 private:
  LatentSource() = default;
  Kind kind_ = Kind::Noise;
  std::size_t dim_ = 0;
  Matrix rows_;
};

struct GanConfig {
  std::vector<std::size_t> gen_hidden = {128, 256, 512, 1024};
  std::vector<std::size_t> disc_hidden = {512, 256, 128};
  double learning_rate = 1e-5;
  std::size_t batch_size = 128;
  std::size_t max_epochs = 2000;
  std::size_t disc_steps = 1;  // discriminator updates per generator update
  double leaky_alpha = 0.2;
  std::size_t patience = 200;  // epochs without validation F1 improvement
  double near_zero_eps = 1e-6;
  std::size_t near_zero_patience = 50;
  std::uint64_t seed = 0;
};

struct TrainTrace {
  std::vector<double> disc_loss;  // one entry per completed epoch
  std::vector<double> gen_loss;
  std::vector<double> val_f1;  // empty when no validation hook is supplied
  std::size_t disc_updates = 0;
  std::size_t gen_updates = 0;
};

struct GanModel {
  MlpModel generator;      // d -> hidden (dense+batchnorm+relu) -> d, linear output
  MlpModel discriminator;  // d -> hidden (dense+leaky_relu) -> 1 logit
  TrainTrace trace;
  std::size_t data_width = 0;
};

MlpModel make_generator(std::size_t d, const std::vector<std::size_t>& hidden, std::uint64_t seed);
MlpModel make_discriminator(std::size_t d, const std::vector<std::size_t>& hidden, double alpha,
                            std::uint64_t seed);

struct DiscriminatorLoss {
  double loss = 0.0;
  Matrix grad_real;  // gradient at the real-batch logits
  Matrix grad_fake;  // gradient at the fake-batch logits
};

// BCE-with-logits against targets 1 for real and 0 for fake, each term
// mean-reduced over its own batch.
DiscriminatorLoss discriminator_loss(const Matrix& real_logits, const Matrix& fake_logits);

// Non-saturating generator objective: BCE-with-logits against target 1.
LossGrad generator_loss(const Matrix& fake_logits);

// Reports validation F1 for the current training state; returning higher
// values resets the early-stopping patience.
using GanValidationHook = std::function<double(std::size_t epoch, const GanModel& state)>;

// Yields latent minibatches during training. Noise draws fresh normals;
// a repertoire is consumed in a reshuffled order without replacement per pass.
class LatentBatcher {
 public:
  LatentBatcher(const LatentSource& src, Rng& rng);
  void start_epoch();
  Matrix next(std::size_t count);

 private:
  const LatentSource& src_;
  Rng& rng_;
  std::vector<std::size_t> order_;
  std::size_t pos_ = 0;
};

// One discriminator update: fakes from the frozen generator (training-mode
// batchnorm), losses against the real batch, one Adam step. Returns the loss.
double discriminator_step(GanModel& gm, AdamState& opt_d, const Matrix& real_batch,
                          const Matrix& latent_batch);

// One generator update through the frozen discriminator. Returns the loss.
double generator_step(GanModel& gm, AdamState& opt_g, const Matrix& latent_batch);

// Alternating training: per real minibatch, disc_steps discriminator updates
// then one generator update. Stops at max_epochs, or once the validation hook
// reports no F1 improvement for cfg.patience epochs. Aborts if a loss goes
// non-finite, or if either loss stays below near_zero_eps for
// near_zero_patience consecutive epochs.
GanModel train_gan(const Matrix& real, const LatentSource& latent, const GanConfig& cfg,
                   const GanValidationHook& hook = {});

struct AccumulateOptions {
  std::optional<double> filter_threshold;  // keep only sigmoid scores >= threshold
  std::uint64_t seed = 0;                  // noise draws in emission
  bool clamp01 = true;                     // clamp exported samples to [0,1]
};

// Emits n_fake generator outputs. A repertoire is consumed in its original
// order, cycling when n_fake exceeds its size. In filter mode extra latents
// are drawn until n_fake samples pass the discriminator, within a budget of
// 50 * n_fake draws.
Matrix accumulate_fake(const GanModel& gm, const LatentSource& latent, std::size_t n_fake,
                       const AccumulateOptions& opt = {});

// epoch,disc_loss,gen_loss,val_f1 rows; the val_f1 cell is empty without a hook.
void write_trace_csv(const TrainTrace& trace, const std::string& path);

}  // namespace smgan
