#pragma once

#include <string>

#include "smgan/dataset.hpp"
#include "smgan/gan.hpp"
#include "smgan/smote.hpp"

namespace smgan {

enum class Method { None, Smote, Gan, SmotifiedGan };

Method method_from_string(const std::string& s);
std::string method_to_string(Method m);
std::string method_display_name(Method m);  // table labels

// One oversampling arm applied to a training split. For every method other
// than None the augmented set is exactly class-balanced and contains the
// original rows unchanged, followed by the synthetic rows labeled 1.
struct OversampleResult {
  Method method = Method::None;
  Matrix synthetic;     // n_syn x d
  Dataset augmented;    // train + synthetic rows labeled 1
  Matrix repertoire;    // SMOTE samples fed to the GAN (smotified_gan only)
  TrainTrace trace;     // GAN training trace (gan / smotified_gan only)
  bool has_trace = false;
  std::string provenance;  // JSON: seeds and configs used
};

// SMOTE the minority up to the majority count, train the GAN with that
// repertoire as the latent source, then map each repertoire row through the
// trained generator exactly once.
OversampleResult smotified_gan_oversample(const Dataset& train, const SmoteConfig& smote_cfg,
                                          const GanConfig& gan_cfg,
                                          const GanValidationHook& hook = {});

// Dispatch over the four arms. none returns the training set unchanged;
// smote augments with raw SMOTE samples; gan trains against noise and
// accumulates fakes; smotified_gan delegates to smotified_gan_oversample.
OversampleResult baseline_oversample(const Dataset& train, Method method,
                                     const SmoteConfig& smote_cfg, const GanConfig& gan_cfg,
                                     const GanValidationHook& hook = {});

// Side-by-side CSV of the SMOTE repertoire and the generator's refinement of
// it, for qualitative inspection of the smotified_gan arm.
void write_pre_post_csv(const Matrix& pre, const Matrix& post, const std::string& path);

}  // namespace smgan
