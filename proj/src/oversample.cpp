#include "smgan/oversample.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace smgan {

Method method_from_string(const std::string& s) {
  if (s == "none") return Method::None;
  if (s == "smote") return Method::Smote;
  if (s == "gan") return Method::Gan;
  if (s == "smotified_gan") return Method::SmotifiedGan;
  throw std::invalid_argument("unknown oversampling method '" + s + "'");
}

std::string method_to_string(Method m) {
  switch (m) {
    case Method::None: return "none";
    case Method::Smote: return "smote";
    case Method::Gan: return "gan";
    case Method::SmotifiedGan: return "smotified_gan";
  }
  return "?";
}

std::string method_display_name(Method m) {
  switch (m) {
    case Method::None: return "Non-oversampled";
    case Method::Smote: return "SMOTE";
    case Method::Gan: return "GAN";
    case Method::SmotifiedGan: return "SMOTified-GAN";
  }
  return "?";
}

namespace {

std::string provenance_json(Method m, const SmoteConfig& sc, const GanConfig& gc,
                            std::size_t target) {
  nlohmann::json j;
  j["method"] = method_to_string(m);
  j["target_count"] = target;
  if (m == Method::Smote || m == Method::SmotifiedGan)
    j["smote"] = {{"k", sc.k}, {"seed", sc.seed}};
  if (m == Method::Gan || m == Method::SmotifiedGan)
    j["gan"] = {{"seed", gc.seed},
                {"gen_hidden", gc.gen_hidden},
                {"disc_hidden", gc.disc_hidden},
                {"learning_rate", gc.learning_rate},
                {"batch_size", gc.batch_size},
                {"max_epochs", gc.max_epochs},
                {"disc_steps", gc.disc_steps}};
  return j.dump();
}

void check_balanced(const OversampleResult& res) {
  if (res.method == Method::None) return;
  const std::size_t minority = res.augmented.count_label(1);
  const std::size_t majority = res.augmented.count_label(0);
  if (minority != majority)
    throw std::logic_error("oversample: augmented set is not balanced (" +
                           std::to_string(minority) + " vs " + std::to_string(majority) + ")");
}

}  // namespace

OversampleResult smotified_gan_oversample(const Dataset& train, const SmoteConfig& smote_cfg,
                                          const GanConfig& gan_cfg, const GanValidationHook& hook) {
  const ClassPartition parts = partition_by_class(train);
  const std::size_t target = parts.majority.size() - parts.minority.size();

  OversampleResult res;
  res.method = Method::SmotifiedGan;
  res.provenance = provenance_json(Method::SmotifiedGan, smote_cfg, gan_cfg, target);
  if (target == 0) {
    res.synthetic = Matrix(0, train.d());
    res.augmented = train;
    return res;
  }

  SmoteConfig sc = smote_cfg;
  sc.target_count = target;
  const SyntheticBatch smote = smote_oversample(parts.minority.features, sc);
  res.repertoire = smote.samples;

  const LatentSource latent = LatentSource::repertoire(smote.samples);
  GanModel gm = train_gan(parts.minority.features, latent, gan_cfg, hook);

  AccumulateOptions opt;
  opt.seed = derive_seed(gan_cfg.seed, 0xACC);
  res.synthetic = accumulate_fake(gm, latent, target, opt);
  res.trace = std::move(gm.trace);
  res.has_trace = true;
  res.augmented = augment_with_minority(train, res.synthetic);
  check_balanced(res);
  return res;
}

OversampleResult baseline_oversample(const Dataset& train, Method method,
                                     const SmoteConfig& smote_cfg, const GanConfig& gan_cfg,
                                     const GanValidationHook& hook) {
  if (method == Method::SmotifiedGan)
    return smotified_gan_oversample(train, smote_cfg, gan_cfg, hook);

  OversampleResult res;
  res.method = method;
  if (method == Method::None) {
    res.synthetic = Matrix(0, train.d());
    res.augmented = train;
    res.provenance = provenance_json(method, smote_cfg, gan_cfg, 0);
    return res;
  }

  const ClassPartition parts = partition_by_class(train);
  const std::size_t target = parts.majority.size() - parts.minority.size();
  res.provenance = provenance_json(method, smote_cfg, gan_cfg, target);
  if (target == 0) {
    res.synthetic = Matrix(0, train.d());
    res.augmented = train;
    return res;
  }

  if (method == Method::Smote) {
    SmoteConfig sc = smote_cfg;
    sc.target_count = target;
    res.synthetic = smote_oversample(parts.minority.features, sc).samples;
  } else {  // Method::Gan
    const LatentSource latent = LatentSource::noise(train.d());
    GanModel gm = train_gan(parts.minority.features, latent, gan_cfg, hook);
    AccumulateOptions opt;
    opt.seed = derive_seed(gan_cfg.seed, 0xACC);
    res.synthetic = accumulate_fake(gm, latent, target, opt);
    res.trace = std::move(gm.trace);
    res.has_trace = true;
  }
  res.augmented = augment_with_minority(train, res.synthetic);
  check_balanced(res);
  return res;
}

void write_pre_post_csv(const Matrix& pre, const Matrix& post, const std::string& path) {
  if (!pre.same_shape(post))
    throw std::invalid_argument("write_pre_post_csv: pre/post shapes differ");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  for (std::size_t j = 0; j < pre.cols; ++j) out << (j ? "," : "") << "smote_" << j;
  for (std::size_t j = 0; j < post.cols; ++j) out << ",gan_" << j;
  out << "\n";
  char buf[64];
  for (std::size_t i = 0; i < pre.rows; ++i) {
    for (std::size_t j = 0; j < pre.cols; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", pre(i, j));
      out << (j ? "," : "") << buf;
    }
    for (std::size_t j = 0; j < post.cols; ++j) {
      std::snprintf(buf, sizeof(buf), ",%.17g", post(i, j));
      out << buf;
    }
    out << "\n";
  }
}

}  // namespace smgan
