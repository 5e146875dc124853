#include <stdexcept>

#include "json.hpp"
#include "smgan/mlp.hpp"

namespace smgan {

namespace {

const char* kind_name(LayerKind k) {
  switch (k) {
    case LayerKind::Dense: return "dense";
    case LayerKind::Relu: return "relu";
    case LayerKind::LeakyRelu: return "leaky_relu";
    case LayerKind::Sigmoid: return "sigmoid";
    case LayerKind::BatchNorm: return "batchnorm";
  }
  return "?";
}

LayerKind kind_from_name(const std::string& s) {
  if (s == "dense") return LayerKind::Dense;
  if (s == "relu") return LayerKind::Relu;
  if (s == "leaky_relu") return LayerKind::LeakyRelu;
  if (s == "sigmoid") return LayerKind::Sigmoid;
  if (s == "batchnorm") return LayerKind::BatchNorm;
  throw std::invalid_argument("unknown layer kind '" + s + "'");
}

}  // namespace

std::string model_to_json(const MlpModel& model) {
  nlohmann::json j;
  j["layers"] = nlohmann::json::array();
  for (const LayerSpec& l : model.layers) {
    nlohmann::json lj{{"kind", kind_name(l.kind)}, {"in", l.in}, {"out", l.out}};
    if (l.kind == LayerKind::LeakyRelu) lj["alpha"] = l.alpha;
    j["layers"].push_back(lj);
  }
  j["dense"] = nlohmann::json::array();
  for (const DenseParams& d : model.dense)
    j["dense"].push_back({{"w", d.w.data}, {"rows", d.w.rows}, {"cols", d.w.cols}, {"b", d.b}});
  j["norms"] = nlohmann::json::array();
  for (const BatchNormParams& p : model.norms)
    j["norms"].push_back({{"gamma", p.gamma},
                          {"beta", p.beta},
                          {"running_mean", p.running_mean},
                          {"running_var", p.running_var},
                          {"momentum", p.momentum},
                          {"eps", p.eps}});
  j["training"] = model.training;
  return j.dump();
}

MlpModel model_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  std::vector<LayerSpec> layers;
  for (const auto& lj : j.at("layers")) {
    LayerSpec l;
    l.kind = kind_from_name(lj.at("kind").get<std::string>());
    l.in = lj.at("in").get<std::size_t>();
    l.out = lj.at("out").get<std::size_t>();
    if (l.kind == LayerKind::LeakyRelu) l.alpha = lj.at("alpha").get<double>();
    layers.push_back(l);
  }
  MlpModel m = make_mlp(layers, 0);
  std::size_t di = 0;
  for (const auto& dj : j.at("dense")) {
    DenseParams& d = m.dense.at(di++);
    d.w.rows = dj.at("rows").get<std::size_t>();
    d.w.cols = dj.at("cols").get<std::size_t>();
    d.w.data = dj.at("w").get<std::vector<double>>();
    d.b = dj.at("b").get<std::vector<double>>();
    if (d.w.data.size() != d.w.rows * d.w.cols)
      throw std::invalid_argument("checkpoint: weight size does not match shape");
  }
  std::size_t bi = 0;
  for (const auto& pj : j.at("norms")) {
    BatchNormParams& p = m.norms.at(bi++);
    p.gamma = pj.at("gamma").get<std::vector<double>>();
    p.beta = pj.at("beta").get<std::vector<double>>();
    p.running_mean = pj.at("running_mean").get<std::vector<double>>();
    p.running_var = pj.at("running_var").get<std::vector<double>>();
    p.momentum = pj.at("momentum").get<double>();
    p.eps = pj.at("eps").get<double>();
  }
  m.training = j.value("training", false);
  return m;
}

}  // namespace smgan
