#include "smgan/smote.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace smgan {

std::vector<std::size_t> knn(std::size_t query, const Matrix& x, std::size_t k) {
  if (x.rows < 2) throw std::invalid_argument("knn: need at least two rows");
  if (query >= x.rows) throw std::out_of_range("knn: query row out of range");
  if (k == 0) throw std::invalid_argument("knn: k must be >= 1");

  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(x.rows - 1);
  const double* q = x.row(query);
  for (std::size_t i = 0; i < x.rows; ++i) {
    if (i == query) continue;
    const double* r = x.row(i);
    double d2 = 0.0;
    for (std::size_t j = 0; j < x.cols; ++j) {
      const double diff = r[j] - q[j];
      d2 += diff * diff;
    }
    dist.emplace_back(d2, i);
  }
  std::sort(dist.begin(), dist.end());  // pairs order ties by row index
  const std::size_t take = std::min(k, dist.size());
  std::vector<std::size_t> out(take);
  for (std::size_t i = 0; i < take; ++i) out[i] = dist[i].second;
  return out;
}

std::vector<double> interpolate_between(std::span<const double> xi, std::span<const double> xj,
                                        std::span<const double> r) {
  std::vector<double> out(xi.size());
  for (std::size_t c = 0; c < xi.size(); ++c) out[c] = xi[c] + (xj[c] - xi[c]) * r[c];
  return out;
}

Matrix interpolate(const Matrix& x, std::size_t query, const std::vector<std::size_t>& neighbors,
                   std::size_t count, Rng& rng, std::vector<std::size_t>* chosen) {
  if (neighbors.empty()) throw std::invalid_argument("interpolate: empty neighbor set");
  Matrix out(count, x.cols);
  std::vector<double> r(x.cols);
  const double* xi = x.row(query);
  for (std::size_t s = 0; s < count; ++s) {
    const std::size_t j = neighbors[rng.uniform_index(neighbors.size())];
    if (chosen) chosen->push_back(j);
    const double* xj = x.row(j);
    for (std::size_t c = 0; c < x.cols; ++c) r[c] = rng.uniform01();
    double* dst = out.row(s);
    for (std::size_t c = 0; c < x.cols; ++c) dst[c] = xi[c] + (xj[c] - xi[c]) * r[c];
  }
  return out;
}

SyntheticBatch smote_oversample(const Matrix& minority, const SmoteConfig& cfg) {
  if (cfg.k == 0) throw std::invalid_argument("smote: k must be >= 1");
  SyntheticBatch batch;
  batch.samples = Matrix(cfg.target_count, minority.cols);
  if (cfg.target_count == 0) return batch;
  if (minority.rows < 2)
    throw std::invalid_argument("smote: minority class has " + std::to_string(minority.rows) +
                                " rows; need at least 2");

  const std::size_t n = minority.rows;
  std::vector<std::vector<std::size_t>> neighbor_sets(n);
  for (std::size_t i = 0; i < n; ++i) neighbor_sets[i] = knn(i, minority, cfg.k);

  Rng rng(cfg.seed);
  std::vector<double> r(minority.cols);
  batch.parents.reserve(cfg.target_count);
  for (std::size_t s = 0; s < cfg.target_count; ++s) {
    const std::size_t i = s % n;
    const auto& nbrs = neighbor_sets[i];
    const std::size_t j = nbrs[rng.uniform_index(nbrs.size())];
    const double* xi = minority.row(i);
    const double* xj = minority.row(j);
    double* dst = batch.samples.row(s);
    for (std::size_t c = 0; c < minority.cols; ++c)
      dst[c] = xi[c] + (xj[c] - xi[c]) * rng.uniform01();
    batch.parents.emplace_back(i, j);
  }
  return batch;
}

void write_synthetic_csv(const SyntheticBatch& batch, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  char buf[64];
  for (std::size_t i = 0; i < batch.samples.rows; ++i) {
    for (std::size_t j = 0; j < batch.samples.cols; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", batch.samples(i, j));
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
}

}  // namespace smgan
